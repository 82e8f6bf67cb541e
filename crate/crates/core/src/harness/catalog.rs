//! Named right-hand sides available to configs.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::fde_solvers::catalog as rhs;
use crate::fde_solvers::{ProblemKind, RhsFunction};
use crate::fracops::gamma_pos;
use crate::{Error, Result};

pub struct CatalogEntry {
    pub id: &'static str,
    /// Closed form of the source term.
    pub formula: &'static str,
    /// Parameter names with defaults (NaN: required).
    pub params: &'static [(&'static str, f64)],
    pub note: &'static str,
}

const NAN: f64 = f64::NAN;

pub const ENTRIES: &[CatalogEntry] = &[
    CatalogEntry {
        id: "zero_rhs",
        formula: "f = 0",
        params: &[],
        note: "closed form x = b1 (+ b2 tau^alpha / Gamma(alpha+1) for the sequential problem)",
    },
    CatalogEntry {
        id: "exp_sublinear",
        formula: "f = exp(-tau) * |x|^r * sign(x)",
        params: &[("r", 0.5)],
        note: "sublinear growth; x/tau^alpha tends to a finite limit",
    },
    CatalogEntry {
        id: "exp_linear",
        formula: "f = a * exp(-tau) * x",
        params: &[("a", 1.0)],
        note: "linear growth with integrable coefficient",
    },
    CatalogEntry {
        id: "singular_product",
        formula: "f = tau^(1/q - alpha) * exp(-lambda tau) * x^r1 * phi2(v) * cos(v), v = D^beta x",
        params: &[
            ("q", 4.0),
            ("lambda", 1.0),
            ("r1", 0.6),
            ("r2", 1.0 / 3.0),
            ("shift", 0.0),
        ],
        note: "phi2(v) = v^r2 when shift = 0, (shift + |v|)^r2 otherwise; direct problem",
    },
    CatalogEntry {
        id: "exp_product",
        formula: "f = exp(-lambda tau) * x^r1 * (shift + |v|)^r2 * cos(v), v = D^beta x",
        params: &[("lambda", 1.0), ("r1", 0.6), ("r2", 1.0 / 3.0), ("shift", 1.0)],
        note: "bounded counterpart of singular_product",
    },
    CatalogEntry {
        id: "manufactured_power_mu",
        formula: "f chosen so that x = b1 + [b2 tau^alpha / Gamma(alpha+1)] + tau^mu",
        params: &[("mu", NAN)],
        note: "exact-solution oracle; mu > alpha for the sequential problem",
    },
];

pub fn contains(id: &str) -> bool {
    ENTRIES.iter().any(|e| e.id == id)
}

fn entry(id: &str) -> Result<&'static CatalogEntry> {
    ENTRIES
        .iter()
        .find(|e| e.id == id)
        .ok_or_else(|| Error::Config(format!("unknown catalog id {id:?}")))
}

fn resolve(e: &CatalogEntry, given: &BTreeMap<String, f64>) -> Result<BTreeMap<&'static str, f64>> {
    if let Some(k) = given.keys().find(|k| !e.params.iter().any(|(n, _)| n == k)) {
        return Err(Error::Config(format!("{}: unknown parameter {k:?}", e.id)));
    }
    let mut out = BTreeMap::new();
    for &(name, default) in e.params {
        let v = given.get(name).copied().unwrap_or(default);
        if v.is_nan() {
            return Err(Error::Config(format!("{}: parameter {name:?} is required", e.id)));
        }
        out.insert(name, v);
    }
    Ok(out)
}

/// Builds the source term for `id`.
pub fn build(id: &str, params: &BTreeMap<String, f64>, kind: ProblemKind, alpha: f64) -> Result<RhsFunction> {
    let e = entry(id)?;
    let p = resolve(e, params)?;
    match id {
        "zero_rhs" => Ok(rhs::zero()),
        "exp_sublinear" => rhs::exp_sublinear(p["r"]),
        "exp_linear" => rhs::exp_linear(p["a"]),
        "singular_product" => rhs::singular_product(rhs::SingularProduct {
            alpha,
            q: p["q"],
            lambda: p["lambda"],
            r1: p["r1"],
            r2: p["r2"],
            shift: p["shift"],
        }),
        "exp_product" => rhs::exp_product(p["lambda"], p["r1"], p["r2"], p["shift"]),
        "manufactured_power_mu" => match kind {
            ProblemKind::Direct => rhs::manufactured_power_direct(alpha, p["mu"]),
            ProblemKind::Sequential => rhs::manufactured_power_sequential(alpha, p["mu"]),
        },
        _ => unreachable!("catalog entry without builder"),
    }
}

pub type ExactSolution = Box<dyn Fn(f64) -> f64>;

/// Closed-form solution, when the catalog knows one.
pub fn exact_solution(
    id: &str,
    params: &BTreeMap<String, f64>,
    kind: ProblemKind,
    alpha: f64,
    b1: f64,
    b2: f64,
) -> Result<Option<ExactSolution>> {
    let p = resolve(entry(id)?, params)?;
    let lift = match kind {
        ProblemKind::Direct => 0.0,
        ProblemKind::Sequential => b2 / gamma_pos(alpha + 1.0),
    };
    Ok(match id {
        "zero_rhs" => Some(Box::new(move |t: f64| b1 + lift * t.powf(alpha))),
        "manufactured_power_mu" => {
            let mu = p["mu"];
            Some(Box::new(move |t: f64| b1 + lift * t.powf(alpha) + t.powf(mu)))
        }
        _ => None,
    })
}

/// Human-readable listing of every entry.
pub fn list_catalog() -> String {
    let mut out = String::new();
    for e in ENTRIES {
        let _ = writeln!(out, "{}", e.id);
        let _ = writeln!(out, "    {}", e.formula);
        if e.params.is_empty() {
            let _ = writeln!(out, "    params: none");
        } else {
            let list: Vec<String> = e
                .params
                .iter()
                .map(|(n, d)| {
                    if d.is_nan() {
                        format!("{n} (required)")
                    } else {
                        format!("{n} = {d}")
                    }
                })
                .collect();
            let _ = writeln!(out, "    params: {}", list.join(", "));
        }
        let _ = writeln!(out, "    {}", e.note);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn listing_has_every_entry_and_formula() {
        let text = list_catalog();
        for e in ENTRIES {
            assert!(text.contains(e.id));
            assert!(text.contains(e.formula));
        }
    }

    #[test]
    fn parameters_are_checked() {
        let mut p = BTreeMap::new();
        assert!(build("manufactured_power_mu", &p, ProblemKind::Direct, 0.5).is_err());
        p.insert("mu".to_string(), 2.0);
        assert!(build("manufactured_power_mu", &p, ProblemKind::Direct, 0.5).is_ok());
        p.insert("nu".to_string(), 2.0);
        assert!(matches!(
            build("manufactured_power_mu", &p, ProblemKind::Direct, 0.5),
            Err(Error::Config(_))
        ));
        assert!(build("nope", &BTreeMap::new(), ProblemKind::Direct, 0.5).is_err());
    }

    #[test]
    fn exact_solutions() {
        let mut p = BTreeMap::new();
        p.insert("mu".to_string(), 2.0);
        let x = exact_solution("manufactured_power_mu", &p, ProblemKind::Direct, 0.5, 1.0, 0.0)
            .unwrap()
            .unwrap();
        assert_eq!(x(3.0), 10.0);
        assert!(
            exact_solution("exp_linear", &BTreeMap::new(), ProblemKind::Direct, 0.5, 1.0, 0.0)
                .unwrap()
                .is_none()
        );
    }
}
