use std::time::Instant;

use csa_core::algorithms::{
    extend_automorphism, iso_cyclic, split_bicyclic, split_cyclic, verify_extension, verify_morphism, Decision,
    MorphismKind, Options,
};
use csa_core::csa::{AlgebraMorphism, Codomain};
use csa_core::normeq::SearchBudget;
use serde_json::Value;

use crate::bundle::{encode_matrix, encode_parts, parse_matrix, parse_parts, Algebra, Bundle, Witness};
use crate::report::{Report, Status};
use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Split {
        algebra: String,
    },
    Iso {
        left: String,
        right: String,
    },
    Extend {
        algebra: String,
        auto: String,
    },
    /// Re-checks the witnesses stored in the bundle, optionally only those
    /// about one algebra.
    Verify {
        algebra: Option<String>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Split { .. } => "split",
            Command::Iso { .. } => "iso",
            Command::Extend { .. } => "extend",
            Command::Verify { .. } => "verify",
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Height bound of the bounded norm search.
    pub budget: Option<i64>,
    pub assert_disjoint: bool,
}

/// Runs `command`; failures become reports with status error.
pub fn execute(command: &Command, bundle: &Bundle, run: &RunOptions) -> Report {
    let start = Instant::now();
    let mut opts = Options { hints: bundle.hints.clone(), assert_disjoint: run.assert_disjoint, ..Options::default() };
    if let Some(h) = run.budget {
        opts.search = SearchBudget::with_height(h);
    }
    let mut report = dispatch(command, bundle, &opts)
        .unwrap_or_else(|e| Report::new(command.name(), Status::Error).with_reason(e.to_string()));
    report.timing_ms = start.elapsed().as_millis() as u64;
    report
}

fn decided<T>(
    name: &str,
    d: Decision<T>,
    witness: impl FnOnce(T) -> Result<Witness, CliError>,
) -> Result<Report, CliError> {
    Ok(match d {
        Decision::Yes(w) => Report::yes(name, witness(w)?),
        Decision::No(c) => Report::no(name, &c),
        Decision::Undecided(r) => Report::new(name, Status::Undecided).with_reason(r),
    })
}

fn dispatch(command: &Command, bundle: &Bundle, opts: &Options) -> Result<Report, CliError> {
    let name = command.name();
    match command {
        Command::Split { algebra } => match bundle.algebra(algebra)? {
            Algebra::Cyclic(a) => decided(name, split_cyclic(a, opts)?, |m| {
                let generators = [a.theta(), a.v()]
                    .iter()
                    .map(|g| Ok(encode_matrix(&m.apply_matrix(g)?)))
                    .collect::<Result<_, CliError>>()?;
                Ok(Witness::Split { algebra: algebra.clone(), generators })
            }),
            Algebra::Bicyclic(c) => decided(name, split_bicyclic(c, opts)?, |m| {
                let generators = c
                    .generators()
                    .iter()
                    .map(|g| Ok(encode_matrix(&m.apply_matrix(g)?)))
                    .collect::<Result<_, CliError>>()?;
                Ok(Witness::Split { algebra: algebra.clone(), generators })
            }),
        },
        Command::Iso { left, right } => {
            let (a1, a2) = (bundle.cyclic(left)?, bundle.cyclic(right)?);
            decided(name, iso_cyclic(a1, a2, opts)?, |m| {
                let generators = [a1.theta(), a1.v()].iter().map(|g| encode_parts(a2, &m.apply(g)?)).collect::<Result<
                    _,
                    CliError,
                >>(
                )?;
                Ok(Witness::Iso { left: left.clone(), right: right.clone(), generators })
            })
        }
        Command::Extend { algebra, auto } => {
            let a = bundle.cyclic(algebra)?;
            let sigma = bundle.automorphism(auto)?;
            decided(name, extend_automorphism(a, sigma, opts)?, |w| {
                Ok(Witness::Extend {
                    algebra: algebra.clone(),
                    auto: auto.clone(),
                    theta: encode_parts(a, &w.theta)?,
                    v: encode_parts(a, &w.v)?,
                })
            })
        }
        Command::Verify { algebra } => {
            let selected: Vec<&Witness> =
                bundle.witnesses.iter().filter(|w| algebra.as_ref().is_none_or(|a| mentions(w, a))).collect();
            if selected.is_empty() {
                return Err(CliError::Validation("no witness to verify".into()));
            }
            for w in &selected {
                if !check_witness(bundle, w)? {
                    return Ok(Report::new(name, Status::No).with_reason(format!("witness fails: {}", describe(w))));
                }
            }
            let last = (*selected.last().unwrap()).clone();
            Ok(Report::yes(name, last).with_reason(format!("{} witness(es) verified", selected.len())))
        }
    }
}

fn mentions(w: &Witness, name: &str) -> bool {
    match w {
        Witness::Split { algebra, .. } | Witness::Extend { algebra, .. } => algebra == name,
        Witness::Iso { left, right, .. } => left == name || right == name,
    }
}

fn describe(w: &Witness) -> String {
    match w {
        Witness::Split { algebra, .. } => format!("split {algebra}"),
        Witness::Iso { left, right, .. } => format!("iso {left} -> {right}"),
        Witness::Extend { algebra, auto, .. } => format!("extend {auto} to {algebra}"),
    }
}

/// Rebuilds the map from its generator images and checks it exactly.
pub fn check_witness(bundle: &Bundle, w: &Witness) -> Result<bool, CliError> {
    match w {
        Witness::Split { algebra, generators } => {
            let alg = bundle.algebra(algebra)?;
            let (sca, words, n) = match alg {
                Algebra::Cyclic(a) => (a.sca(), a.basis_words(), a.degree()),
                Algebra::Bicyclic(c) => {
                    let comp = c.composite();
                    (c.sca(), c.basis_words(), comp.n1() * comp.n2())
                }
            };
            if generators.len() != words.iter().flatten().max().map_or(0, |g| g + 1) {
                return Ok(false);
            }
            let k = alg.base();
            let images = generators
                .iter()
                .map(|g| Ok(parse_matrix(k, n, g)?.into_entries()))
                .collect::<Result<Vec<_>, CliError>>()?;
            let m = AlgebraMorphism::from_words(sca, Codomain::Matrices(k.clone(), n), &words, &images, false)?;
            Ok(verify_morphism(&m, MorphismKind::Isomorphism))
        }
        Witness::Iso { left, right, generators } => {
            let (a1, a2) = (bundle.cyclic(left)?, bundle.cyclic(right)?);
            let [t, v] = generators.as_slice() else {
                return Ok(false);
            };
            let images = vec![parse_parts(a2, t)?, parse_parts(a2, v)?];
            let m = AlgebraMorphism::from_words(
                a1.sca(),
                Codomain::Algebra(a2.sca().clone()),
                &a1.basis_words(),
                &images,
                false,
            )?;
            Ok(verify_morphism(&m, MorphismKind::Isomorphism))
        }
        Witness::Extend { algebra, auto, theta, v } => {
            let a = bundle.cyclic(algebra)?;
            let sigma = bundle.automorphism(auto)?;
            let (t, w) = (parse_parts(a, theta)?, parse_parts(a, v)?);
            if !verify_extension(a, sigma, &t, &w) {
                return Ok(false);
            }
            let m = AlgebraMorphism::from_words(
                a.sca(),
                Codomain::Algebra(a.sca().clone()),
                &a.basis_words(),
                &[t, w],
                false,
            )?
            .with_twist(sigma.clone())?;
            Ok(verify_morphism(&m, MorphismKind::Isomorphism))
        }
    }
}

/// The witness of a report as a bundle fragment, ready for `verify`.
pub fn witness_bundle(w: &Witness) -> Value {
    serde_json::json!({ "witnesses": [w] })
}
