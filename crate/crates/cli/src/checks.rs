//! Property-check suites with deterministic, machine-readable reports.

use std::fmt;

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value as Json};

use wickstar::arith::{binomial, factorial, rational, GaussRational, NuPolynomial, Rational};
use wickstar::json::{
    fourier_to_json, matrix_to_json, rational_to_json, star_element_to_json, symbol_to_json,
};
use wickstar::models::disk::{disk_product, DiskElement};
use wickstar::models::radial::{exponential_coefficients, wick_radial_power};
use wickstar::models::torus::{
    check_quotient_well_defined, moyal_product, torus_quotient, torus_quotient_dimension, MoyalData,
    TorusQuotient,
};
use wickstar::quotient::{quotient_image_rank, quotient_map, quotient_size, QuotientOperator};
use wickstar::random::{
    random_antihermitean, random_fourier_sum, random_matrix, random_star_element, random_symbol,
};
use wickstar::star::{check_corollary2, check_strong_invariance, star_u, StarElement};
use wickstar::tensor::{brute_force_m, contract_m, operator_product};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Assoc,
    Cor2,
    Invariance,
    Quotient,
    Torus,
    Disk,
    Starexp,
    Oracle,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Assoc => "assoc",
            Suite::Cor2 => "cor2",
            Suite::Invariance => "invariance",
            Suite::Quotient => "quotient",
            Suite::Torus => "torus",
            Suite::Disk => "disk",
            Suite::Starexp => "starexp",
            Suite::Oracle => "oracle",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckParams {
    pub n: usize,
    pub max_degree: usize,
    pub k: usize,
    pub instances: usize,
    pub order: usize,
    pub max_index: usize,
    /// Run a single instance, as in a reproduction command.
    pub only: Option<usize>,
}

impl Default for CheckParams {
    fn default() -> Self {
        CheckParams {
            n: 1,
            max_degree: 2,
            k: 2,
            instances: 20,
            order: 8,
            max_index: 3,
            only: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundsError(pub String);

impl fmt::Display for BoundsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parameter out of bounds: {}", self.0)
    }
}

impl std::error::Error for BoundsError {}

fn within(name: &str, v: usize, lo: usize, hi: usize) -> Result<(), BoundsError> {
    if (lo..=hi).contains(&v) {
        Ok(())
    } else {
        Err(BoundsError(format!("{name} = {v}, allowed {lo}..={hi}")))
    }
}

impl CheckParams {
    pub fn validate(&self, suite: Suite) -> Result<(), BoundsError> {
        within("instances", self.instances, 1, 10_000)?;
        match suite {
            Suite::Assoc | Suite::Invariance => {
                within("n", self.n, 1, 3)?;
                within("max-degree", self.max_degree, 0, 3)?;
            }
            Suite::Cor2 | Suite::Oracle => {
                within("n", self.n, 1, 2)?;
                within("max-degree", self.max_degree, 0, 3)?;
            }
            Suite::Quotient => {
                within("n", self.n, 1, 3)?;
                within("K", self.k, 1, 4)?;
                within("max-degree", self.max_degree, 0, 3)?;
                let size = quotient_size(self.n, self.k);
                if size > 15 {
                    return Err(BoundsError(format!(
                        "n = {} and K = {} give a {size}-dimensional space, at most 15 allowed",
                        self.n, self.k
                    )));
                }
            }
            Suite::Torus => {
                within("n", self.n, 1, 2)?;
                within("K", self.k, 1, 6)?;
            }
            Suite::Disk => within("max-index", self.max_index, 0, 5)?,
            Suite::Starexp => within("order", self.order, 0, 16)?,
        }
        if let Some(i) = self.only {
            let count = self.instance_count(suite);
            if i >= count {
                return Err(BoundsError(format!("only = {i}, the suite has {count} instances")));
            }
        }
        Ok(())
    }

    fn instance_count(&self, suite: Suite) -> usize {
        match suite {
            Suite::Starexp => self.order + 1,
            _ => self.instances,
        }
    }

    fn flags(&self, suite: Suite) -> Vec<String> {
        let mut out = Vec::new();
        let mut push = |flag: &str, v: usize| out.push(format!("--{flag} {v}"));
        match suite {
            Suite::Assoc | Suite::Invariance | Suite::Cor2 | Suite::Oracle => {
                push("n", self.n);
                push("max-degree", self.max_degree);
            }
            Suite::Quotient => {
                push("n", self.n);
                push("K", self.k);
                push("max-degree", self.max_degree);
            }
            Suite::Torus => {
                push("n", self.n);
                push("K", self.k);
            }
            Suite::Disk => push("max-index", self.max_index),
            Suite::Starexp => push("order", self.order),
        }
        if suite != Suite::Starexp {
            push("instances", self.instances);
        }
        out
    }

    fn to_json(&self, suite: Suite) -> Json {
        let mut m = serde_json::Map::new();
        let mut put = |key: &str, v: usize| {
            m.insert(key.into(), json!(v));
        };
        match suite {
            Suite::Assoc | Suite::Invariance | Suite::Cor2 | Suite::Oracle => {
                put("n", self.n);
                put("max_degree", self.max_degree);
            }
            Suite::Quotient => {
                put("n", self.n);
                put("K", self.k);
                put("max_degree", self.max_degree);
            }
            Suite::Torus => {
                put("n", self.n);
                put("K", self.k);
            }
            Suite::Disk => put("max_index", self.max_index),
            Suite::Starexp => put("order", self.order),
        }
        if suite != Suite::Starexp {
            put("instances", self.instances);
        }
        Json::Object(m)
    }
}

/// The command that reruns `suite` with these parameters.
pub fn reproduce_command(suite: Suite, seed: u64, params: &CheckParams, only: Option<usize>) -> String {
    let mut parts = vec![format!("wickstar check --suite {} --seed {seed}", suite.name())];
    parts.extend(params.flags(suite));
    if let Some(i) = only {
        parts.push(format!("--only {i}"));
    }
    parts.join(" ")
}

struct Outcome {
    inputs: Json,
    failure: Option<String>,
}

impl Outcome {
    fn new(inputs: Json) -> Self {
        Outcome { inputs, failure: None }
    }

    fn require(&mut self, ok: wickstar::Result<bool>, what: &str) {
        if self.failure.is_some() {
            return;
        }
        match ok {
            Ok(true) => {}
            Ok(false) => self.failure = Some(what.to_string()),
            Err(e) => self.failure = Some(format!("{what}: {e}")),
        }
    }
}

fn rng_for(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn assoc(p: &CheckParams, rng: &mut ChaCha8Rng) -> Outcome {
    let [f, g, h] = [0; 3].map(|_| {
        let d = rng.gen_range(0..=p.max_degree);
        random_symbol(rng, p.n, d)
    });
    let mut out = Outcome::new(json!({"f": symbol_to_json(&f), "g": symbol_to_json(&g), "h": symbol_to_json(&h)}));
    let [f, g, h] = [f, g, h].map(|s| StarElement::lift(&s));
    let same = (|| {
        let left = star_u(&star_u(&f, &g)?, &h)?;
        let right = star_u(&f, &star_u(&g, &h)?)?;
        Ok(left.expand().same_series(&right.expand()))
    })();
    out.require(same, "(f ⋆ g) ⋆ h differs from f ⋆ (g ⋆ h)");
    out
}

fn cor2(p: &CheckParams, rng: &mut ChaCha8Rng) -> Outcome {
    let (k, l) = (rng.gen_range(0..=p.max_degree), rng.gen_range(0..=p.max_degree));
    let (a, b) = (random_matrix(rng, p.n), random_matrix(rng, p.n));
    let mut out = Outcome::new(json!({"A": matrix_to_json(&a), "B": matrix_to_json(&b), "k": k, "l": l}));
    out.require(check_corollary2(&a, &b, k, l), "σ(A)^k ⋆ σ(B)^l differs from the closed form");
    out
}

fn invariance(p: &CheckParams, rng: &mut ChaCha8Rng) -> Outcome {
    let d = rng.gen_range(0..=p.max_degree);
    let a = random_antihermitean(rng, p.n);
    let phi = random_symbol(rng, p.n, d);
    let mut out = Outcome::new(json!({"A": matrix_to_json(&a), "phi": symbol_to_json(&phi)}));
    out.require(check_strong_invariance(&a, &phi), "star commutator with σ(A) is not the first-order action");
    out
}

fn quotient(p: &CheckParams, rng: &mut ChaCha8Rng) -> Outcome {
    let (lx, ly) = (rng.gen_range(0..=p.max_degree), rng.gen_range(0..=p.max_degree));
    let (x, y) = (random_star_element(rng, p.n, lx), random_star_element(rng, p.n, ly));
    let mut out = Outcome::new(json!({"x": star_element_to_json(&x), "y": star_element_to_json(&y)}));
    let k = p.k;
    let same = (|| {
        let lhs = quotient_map(&star_u(&x, &y)?, k)?;
        let rhs = quotient_map(&x, k)?.compose(&quotient_map(&y, k)?)?;
        Ok(lhs == rhs)
    })();
    out.require(same, "the quotient map is not multiplicative");
    out
}

fn torus_data(p: &CheckParams) -> MoyalData {
    MoyalData::standard(p.n, rational(1, p.k as i64))
}

fn torus(p: &CheckParams, rng: &mut ChaCha8Rng) -> Outcome {
    let data = torus_data(p);
    let [f, g, h] = [0; 3].map(|_| random_fourier_sum(rng, &data, 3));
    let mut out = Outcome::new(json!({"f": fourier_to_json(&f), "g": fourier_to_json(&g), "h": fourier_to_json(&h)}));
    let moyal = (|| {
        let left = moyal_product(&moyal_product(&f, &g)?, &h)?;
        let right = moyal_product(&f, &moyal_product(&g, &h)?)?;
        Ok(left.same_value(&right))
    })();
    out.require(moyal, "the Moyal product is not associative");
    let k = p.k;
    let quotient = (|| {
        let [qf, qg, qh] = [&f, &g, &h].map(|s| torus_quotient(s, k));
        let (qf, qg, qh) = (qf?, qg?, qh?);
        let left = qf.product(&qg)?.product(&qh)?;
        let right = qf.product(&qg.product(&qh)?)?;
        let unit = TorusQuotient::unit(data.clone(), k)?;
        let unital = unit.product(&qf)?.same_value(&qf) && qf.product(&unit)?.same_value(&qf);
        Ok(left.same_value(&right) && unital)
    })();
    out.require(quotient, "the quotient product is not associative and unital");
    out
}

fn disk(p: &CheckParams, rng: &mut ChaCha8Rng) -> Outcome {
    let mut idx = || (rng.gen_range(0..=p.max_index), rng.gen_range(0..=p.max_index));
    let [a, b, c] = [idx(), idx(), idx()];
    let mut out = Outcome::new(json!({"f": [a.0, a.1], "g": [b.0, b.1], "h": [c.0, c.1]}));
    let [f, g, h] = [a, b, c].map(|(p, q)| DiskElement::basis(p, q));
    let left = disk_product(&disk_product(&f, &g), &h);
    let right = disk_product(&f, &disk_product(&g, &h));
    out.require(Ok(left == right), "the disk product is not associative");
    let unit = DiskElement::unit();
    out.require(Ok(disk_product(&unit, &f) == f && disk_product(&f, &unit) == f), "f[0,0] is not a unit");
    out
}

fn starexp(p: &CheckParams, m: usize) -> Outcome {
    let mut out = Outcome::new(json!({"alpha_order": m}));
    let expected = &exponential_coefficients(p.order)[m];
    let inv = GaussRational::real(Rational::new(One::one(), factorial(m)));
    let wick = wick_radial_power(m).scale(&NuPolynomial::constant(inv));
    out.require(Ok(&wick == expected), "x^{∗m}/m! differs from the exponential's coefficient");
    out
}

fn oracle(p: &CheckParams, rng: &mut ChaCha8Rng) -> Outcome {
    let (k, l) = (rng.gen_range(0..=p.max_degree), rng.gen_range(0..=p.max_degree));
    let (a, b) = (random_symbol(rng, p.n, k), random_symbol(rng, p.n, l));
    let mut out = Outcome::new(json!({"a": symbol_to_json(&a), "b": symbol_to_json(&b)}));
    for r in 0..=k.min(l) {
        let same = (|| Ok(contract_m(&a, &b, r)? == brute_force_m(&a, &b, r)?))();
        out.require(same, &format!("contraction of order {r} differs from the derivative oracle"));
    }
    if k == l {
        let kk = Rational::from_integer(factorial(k) * factorial(k));
        let same = (|| Ok(contract_m(&a, &b, k)? == operator_product(&a, &b)?.scale_rational(&kk)))();
        out.require(same, "full contraction differs from K!K! times the operator product");
    }
    out
}

fn run_instance(suite: Suite, p: &CheckParams, seed: u64, index: usize) -> Outcome {
    let mut rng = rng_for(seed, index);
    match suite {
        Suite::Assoc => assoc(p, &mut rng),
        Suite::Cor2 => cor2(p, &mut rng),
        Suite::Invariance => invariance(p, &mut rng),
        Suite::Quotient => quotient(p, &mut rng),
        Suite::Torus => torus(p, &mut rng),
        Suite::Disk => disk(p, &mut rng),
        Suite::Starexp => starexp(p, index),
        Suite::Oracle => oracle(p, &mut rng),
    }
}

/// Whole-suite checks that do not depend on random input, and the
/// dimension they report.
fn global_checks(suite: Suite, p: &CheckParams) -> (Vec<(String, Option<String>)>, Option<usize>) {
    let describe = |r: wickstar::Result<bool>, what: &str| match r {
        Ok(true) => None,
        Ok(false) => Some(what.to_string()),
        Err(e) => Some(format!("{what}: {e}")),
    };
    match suite {
        Suite::Quotient => {
            let (n, k) = (p.n, p.k);
            let expected = quotient_size(n, k).pow(2);
            let unit = quotient_map(&StarElement::unit(n), k).map(|op| op == QuotientOperator::identity(n, k));
            let rank = quotient_image_rank(n, k);
            let dim = rank.as_ref().ok().copied();
            let formula = binomial(n + k, k);
            let checks = vec![
                ("unit maps to the identity".to_string(), describe(unit, "the unit does not map to the identity")),
                (
                    "image spans the operator algebra".to_string(),
                    describe(rank.map(|r| r == expected), &format!("image rank differs from C(n+K,K)² = {formula}²")),
                ),
            ];
            (checks, dim)
        }
        Suite::Torus => {
            let data = torus_data(p);
            let dims = torus_quotient_dimension(&data, p.k);
            let dim = dims.as_ref().ok().copied();
            let expected = p.k.pow(2 * p.n as u32);
            let checks = vec![
                (
                    "product well defined on classes".to_string(),
                    describe(check_quotient_well_defined(&data, p.k), "the product does not respect classes"),
                ),
                (
                    "dimension K^(2n)".to_string(),
                    describe(dims.map(|d| d == expected), &format!("class count differs from {expected}")),
                ),
            ];
            (checks, dim)
        }
        _ => (Vec::new(), None),
    }
}

/// Runs `suite` and returns (passed, report).
pub fn run_checks(suite: Suite, seed: u64, params: &CheckParams) -> Result<(bool, Json), BoundsError> {
    params.validate(suite)?;
    let indices: Vec<usize> = match params.only {
        Some(i) => vec![i],
        None => (0..params.instance_count(suite)).collect(),
    };
    let outcomes: Vec<(usize, Outcome)> =
        indices.par_iter().map(|&i| (i, run_instance(suite, params, seed, i))).collect();
    let (globals, dimension) = global_checks(suite, params);

    let failed: Vec<&(usize, Outcome)> = outcomes.iter().filter(|(_, o)| o.failure.is_some()).collect();
    let global_failures: Vec<&(String, Option<String>)> = globals.iter().filter(|(_, f)| f.is_some()).collect();
    let passed = failed.is_empty() && global_failures.is_empty();

    let counterexample = failed.first().map(|(i, o)| {
        json!({
            "index": i,
            "inputs": o.inputs,
            "reason": o.failure,
            "reproduce": reproduce_command(suite, seed, params, Some(*i)),
        })
    });
    let mut report = json!({
        "suite": suite.name(),
        "seed": seed,
        "params": params.to_json(suite),
        "instances": outcomes.len(),
        "failures": failed.len(),
        "passed": passed,
        "counterexample": counterexample,
        "reproduce": reproduce_command(suite, seed, params, params.only),
    });
    if !globals.is_empty() {
        report["checks"] = globals
            .iter()
            .map(|(name, f)| json!({"name": name, "passed": f.is_none(), "reason": f}))
            .collect();
        if let Some(d) = dimension {
            report["dimension"] = json!(d);
        }
        if let Some((_, Some(reason))) = global_failures.first() {
            report["global_failure"] = json!(reason);
        }
    }
    if suite == Suite::Torus {
        report["params"]["lambda"] = rational_to_json(&rational(1, params.k as i64));
    }
    Ok((passed, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(f: impl FnOnce(&mut CheckParams)) -> CheckParams {
        let mut p = CheckParams::default();
        f(&mut p);
        p
    }

    #[test]
    fn documented_runs() {
        let (ok, r) = run_checks(Suite::Assoc, 0, &params(|p| p.instances = 20)).unwrap();
        assert!(ok, "{r}");
        assert_eq!(r["instances"], 20);
        let (ok, r) = run_checks(Suite::Quotient, 0, &params(|p| p.instances = 5)).unwrap();
        assert!(ok, "{r}");
        assert_eq!(r["dimension"], 9);
        let (ok, r) = run_checks(Suite::Torus, 0, &params(|p| {
            p.k = 3;
            p.instances = 5;
        }))
        .unwrap();
        assert!(ok, "{r}");
        assert_eq!(r["dimension"], 9);
    }

    #[test]
    fn every_suite_passes_small() {
        let suites = [
            Suite::Assoc,
            Suite::Cor2,
            Suite::Invariance,
            Suite::Quotient,
            Suite::Torus,
            Suite::Disk,
            Suite::Starexp,
            Suite::Oracle,
        ];
        for s in suites {
            let (ok, r) = run_checks(s, 3, &params(|p| {
                p.instances = 4;
                p.order = 5;
            }))
            .unwrap();
            assert!(ok, "{}: {r}", s.name());
            assert!(r["counterexample"].is_null());
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let p = params(|p| p.instances = 6);
        let a = run_checks(Suite::Oracle, 11, &p).unwrap().1;
        let b = run_checks(Suite::Oracle, 11, &p).unwrap().1;
        assert_eq!(a.to_string(), b.to_string());
        let single = run_checks(Suite::Oracle, 11, &params(|p| {
            p.instances = 6;
            p.only = Some(4);
        }))
        .unwrap()
        .1;
        assert_eq!(single["instances"], 1);
    }

    #[test]
    fn instance_inputs_do_not_depend_on_parallelism() {
        let p = CheckParams::default();
        let a = run_instance(Suite::Assoc, &p, 5, 3).inputs;
        let b = run_instance(Suite::Assoc, &p, 5, 3).inputs;
        assert_eq!(a, b);
        assert_ne!(a, run_instance(Suite::Assoc, &p, 5, 4).inputs);
    }

    #[test]
    fn bounds() {
        assert!(run_checks(Suite::Assoc, 0, &params(|p| p.n = 0)).is_err());
        assert!(run_checks(Suite::Quotient, 0, &params(|p| {
            p.n = 3;
            p.k = 4;
        }))
        .is_err());
        assert!(run_checks(Suite::Assoc, 0, &params(|p| p.only = Some(20))).is_err());
        assert!(run_checks(Suite::Starexp, 0, &params(|p| p.order = 40)).is_err());
    }

    #[test]
    fn reproduce_command_round_trips_flags() {
        let p = params(|p| p.k = 3);
        assert_eq!(
            reproduce_command(Suite::Torus, 9, &p, Some(2)),
            "wickstar check --suite torus --seed 9 --n 1 --K 3 --instances 20 --only 2"
        );
    }

    #[test]
    fn failure_report_shape() {
        // a failing instance, built by hand, produces a counterexample entry
        let mut o = Outcome::new(json!({"x": 1}));
        o.require(Ok(false), "forced");
        o.require(Ok(false), "second");
        assert_eq!(o.failure.as_deref(), Some("forced"));
    }
}
