//! The two multipartite mutual informations and their conditional forms,
//! together with numeric verifiers for the algebraic identities relating
//! them.
//!
//! For a state on parties `A_1 … A_m` (each party a set of layout labels) the
//! crate computes, in bits:
//!
//! * `I(A_1:…:A_m) = Σ_i S(A_i) − S(A_1…A_m)` — the deviation from the
//!   product of marginals;
//! * `S_m(A_1:…:A_m) = Σ_i S(all \ A_i) − (m−1)·S(all)` — the dual sum over
//!   complements.
//!
//! Conditioning on a register `E` replaces every entropy `S(T)` by
//! `S(TE) − S(E)` termwise; conditional values are plain entropy arithmetic
//! on label sets, never explicit conditional states. Both quantities collapse
//! to the ordinary mutual information for two parties, and they satisfy a web
//! of identities ([`identity_suite`]) plus a chain decomposition over paired
//! subsystems ([`chain_residuals`]).

use std::collections::BTreeSet;
use std::fmt;

use crate::linalg::CMat;
use crate::optim::{multi_restart, NmOptions, RestartSpec};
use crate::state::{entropy, partial_trace, DensityMatrix, SystemLayout};
use crate::{Error, Result};

/// Selects between the two multipartite mutual informations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    /// `Σ S(A_i) − S(all)`.
    I,
    /// `Σ S(all \ A_i) − (m−1) S(all)`.
    S,
}

impl fmt::Display for Which {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Which::I => write!(f, "I"),
            Which::S => write!(f, "S"),
        }
    }
}

impl std::str::FromStr for Which {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" | "i" => Ok(Which::I),
            "S" | "s" => Ok(Which::S),
            other => Err(Error::Parse(format!("unknown variant {other:?}, expected I or S"))),
        }
    }
}

/// A grouping of layout labels into at least two parties plus an optional
/// conditioning register.
///
/// Labels not covered by any party or the conditioner are traced out before
/// evaluation, so one partition can be reused across states that carry extra
/// registers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    parties: Vec<Vec<String>>,
    conditioner: Vec<String>,
}

impl Partition {
    /// Builds a partition; parties must be nonempty and all label sets
    /// pairwise disjoint.
    pub fn new<P, L>(parties: P, conditioner: L) -> Result<Self>
    where
        P: IntoIterator<Item = L>,
        L: IntoIterator<Item = String>,
    {
        let parties: Vec<Vec<String>> = parties
            .into_iter()
            .map(|p| p.into_iter().collect())
            .collect();
        let conditioner: Vec<String> = conditioner.into_iter().collect();
        if parties.len() < 2 {
            return Err(Error::BadPartition(format!(
                "need at least 2 parties, got {}",
                parties.len()
            )));
        }
        if parties.iter().any(|p| p.is_empty()) {
            return Err(Error::BadPartition("empty party".into()));
        }
        let mut seen = BTreeSet::new();
        for label in parties.iter().flatten().chain(conditioner.iter()) {
            if !seen.insert(label.clone()) {
                return Err(Error::BadPartition(format!("label {label} appears twice")));
            }
        }
        Ok(Self {
            parties,
            conditioner,
        })
    }

    /// Convenience constructor: one single-label party per label, empty
    /// conditioner.
    pub fn singletons<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        Self::new(
            labels.into_iter().map(|l| vec![l.into()]),
            Vec::<String>::new(),
        )
    }

    /// Parses the `"A,A2:B:C|E"` grammar: parties joined by `:`, labels
    /// within a party joined by `,`, optional conditioner after `|`.
    pub fn parse(text: &str) -> Result<Self> {
        let (parties_part, cond_part) = match text.split_once('|') {
            Some((p, c)) => (p, Some(c)),
            None => (text, None),
        };
        if cond_part.map_or(false, |c| c.trim().is_empty()) {
            return Err(Error::Parse(
                "empty conditioner after '|' in partition".into(),
            ));
        }
        let split_labels = |chunk: &str| -> Result<Vec<String>> {
            let labels: Vec<String> = chunk
                .split(',')
                .map(|l| l.trim().to_string())
                .collect();
            if labels.iter().any(|l| l.is_empty()) {
                return Err(Error::Parse(format!("empty label in partition chunk {chunk:?}")));
            }
            Ok(labels)
        };
        let mut parties = Vec::new();
        for chunk in parties_part.split(':') {
            parties.push(split_labels(chunk)?);
        }
        let conditioner = match cond_part {
            Some(c) => split_labels(c)?,
            None => Vec::new(),
        };
        Self::new(parties, conditioner)
    }

    pub fn parties(&self) -> &[Vec<String>] {
        &self.parties
    }

    pub fn conditioner(&self) -> &[String] {
        &self.conditioner
    }

    /// Number of parties.
    pub fn arity(&self) -> usize {
        self.parties.len()
    }

    /// All labels of all parties, in partition order.
    pub fn party_labels(&self) -> Vec<String> {
        self.parties.iter().flatten().cloned().collect()
    }

    /// Checks that every referenced label exists in `layout`.
    pub fn validate_against(&self, layout: &SystemLayout) -> Result<()> {
        for label in self.parties.iter().flatten().chain(self.conditioner.iter()) {
            if !layout.contains(label) {
                return Err(Error::BadPartition(format!(
                    "label {label} not present in state layout"
                )));
            }
        }
        Ok(())
    }

    /// This partition with an extra conditioner label appended.
    pub fn with_extra_conditioner(&self, label: &str) -> Result<Partition> {
        let mut conditioner = self.conditioner.clone();
        conditioner.push(label.to_string());
        Partition::new(self.parties.clone(), conditioner)
    }

    /// This partition with the conditioner replaced.
    pub fn with_conditioner(&self, conditioner: Vec<String>) -> Result<Partition> {
        Partition::new(self.parties.clone(), conditioner)
    }
}

impl fmt::Display for Partition {
    fmt_partition!();
}

macro_rules! fmt_partition {
    () => {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            let parties: Vec<String> = self.parties.iter().map(|p| p.join(",")).collect();
            write!(f, "{}", parties.join(":"))?;
            if !self.conditioner.is_empty() {
                write!(f, "|{}", self.conditioner.join(","))?;
            }
            Ok(())
        }
    };
}
use fmt_partition;

/// Entropy in bits of the marginal on `labels`; zero for the empty set.
pub fn marginal_entropy<S: AsRef<str>>(rho: &DensityMatrix, labels: &[S]) -> Result<f64> {
    if labels.is_empty() {
        return Ok(0.0);
    }
    let keep: BTreeSet<&str> = labels.iter().map(|l| l.as_ref()).collect();
    for label in &keep {
        if !rho.layout().contains(label) {
            return Err(Error::UnknownLabel((*label).to_string()));
        }
    }
    let discard: Vec<&str> = rho
        .layout()
        .labels()
        .filter(|l| !keep.contains(l))
        .collect();
    if discard.is_empty() {
        return Ok(entropy(rho));
    }
    // For a globally pure state the marginal on a set and on its complement
    // share a spectrum; reduce to the smaller side.
    let keep_dim: usize = keep
        .iter()
        .map(|l| rho.layout().dim_of(l).expect("checked above"))
        .product();
    if keep_dim * keep_dim > rho.dim() && rho.purity() >= 1.0 - 1e-12 {
        let keep_vec: Vec<&str> = keep.iter().copied().collect();
        return Ok(entropy(&partial_trace(rho, &keep_vec)?));
    }
    Ok(entropy(&partial_trace(rho, &discard)?))
}

fn union<S: AsRef<str>>(sets: &[&[S]]) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for set in sets {
        for label in set.iter() {
            let l = label.as_ref();
            if !out.iter().any(|x| x == l) {
                out.push(l.to_string());
            }
        }
    }
    out
}

fn check_unconditional(part: &Partition) -> Result<()> {
    if !part.conditioner.is_empty() {
        return Err(Error::BadPartition(
            "this quantity takes an empty conditioner; use cond_multi_info".into(),
        ));
    }
    Ok(())
}

/// `I(A_1:…:A_m) = Σ_i S(A_i) − S(A_1…A_m)`.
pub fn multi_info_i(rho: &DensityMatrix, part: &Partition) -> Result<f64> {
    check_unconditional(part)?;
    part.validate_against(rho.layout())?;
    let mut total = 0.0;
    for party in part.parties() {
        total += marginal_entropy(rho, party)?;
    }
    let all = part.party_labels();
    Ok(total - marginal_entropy(rho, &all)?)
}

/// `S_m(A_1:…:A_m) = Σ_i S(all \ A_i) − (m−1)·S(all)`.
pub fn multi_info_s(rho: &DensityMatrix, part: &Partition) -> Result<f64> {
    check_unconditional(part)?;
    part.validate_against(rho.layout())?;
    let all = part.party_labels();
    let m = part.arity();
    let mut total = 0.0;
    for party in part.parties() {
        let rest: Vec<String> = all
            .iter()
            .filter(|l| !party.iter().any(|p| p == *l))
            .cloned()
            .collect();
        total += marginal_entropy(rho, &rest)?;
    }
    Ok(total - (m as f64 - 1.0) * marginal_entropy(rho, &all)?)
}

/// Conditional multipartite mutual information, obtained by replacing every
/// entropy `S(T)` with `S(TE) − S(E)` in the chosen formula. An empty
/// conditioner delegates to the unconditional quantity.
pub fn cond_multi_info(sigma: &DensityMatrix, part: &Partition, which: Which) -> Result<f64> {
    if part.conditioner.is_empty() {
        return match which {
            Which::I => multi_info_i(sigma, part),
            Which::S => multi_info_s(sigma, part),
        };
    }
    part.validate_against(sigma.layout())?;
    let e = part.conditioner();
    let m = part.arity() as f64;
    let s_e = marginal_entropy(sigma, e)?;
    let all_e = union(&[&part.party_labels(), e]);
    let s_all_e = marginal_entropy(sigma, &all_e)?;
    match which {
        Which::I => {
            // Σ S(A_i E) − (m−1) S(E) − S(all E)
            let mut total = 0.0;
            for party in part.parties() {
                total += marginal_entropy(sigma, &union(&[party, e]))?;
            }
            Ok(total - (m - 1.0) * s_e - s_all_e)
        }
        Which::S => {
            // Σ S((all \ A_i) E) − S(E) − (m−1) S(all E)
            let all = part.party_labels();
            let mut total = 0.0;
            for party in part.parties() {
                let rest: Vec<String> = all
                    .iter()
                    .filter(|l| !party.iter().any(|p| p == *l))
                    .cloned()
                    .collect();
                total += marginal_entropy(sigma, &union(&[&rest, e]))?;
            }
            Ok(total - s_e - (m - 1.0) * s_all_e)
        }
    }
}

/// `I(A:B|E) = S(AE) + S(BE) − S(ABE) − S(E)`; `e` may be empty.
pub fn bipartite_cmi<S: AsRef<str>>(
    sigma: &DensityMatrix,
    a: &[S],
    b: &[S],
    e: &[S],
) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::BadPartition("bipartite CMI needs two nonempty sides".into()));
    }
    let mut seen = BTreeSet::new();
    for label in a.iter().chain(b.iter()).chain(e.iter()) {
        if !seen.insert(label.as_ref()) {
            return Err(Error::BadPartition(format!(
                "label {} appears on two sides of a bipartite CMI",
                label.as_ref()
            )));
        }
    }
    let s_ae = marginal_entropy(sigma, &union(&[a, e]))?;
    let s_be = marginal_entropy(sigma, &union(&[b, e]))?;
    let s_abe = marginal_entropy(sigma, &union(&[a, b, e]))?;
    let s_e = marginal_entropy(sigma, e)?;
    Ok(s_ae + s_be - s_abe - s_e)
}

/// Linear combination of subset entropies; used to verify that conditioning
/// twice agrees with conditioning on the union.
#[derive(Clone, Debug)]
struct EntropyExpr {
    terms: Vec<(f64, BTreeSet<String>)>,
}

impl EntropyExpr {
    fn multi_info(parties: &[Vec<String>], which: Which) -> Self {
        let all: BTreeSet<String> = parties.iter().flatten().cloned().collect();
        let m = parties.len() as f64;
        let mut terms = Vec::new();
        match which {
            Which::I => {
                for party in parties {
                    terms.push((1.0, party.iter().cloned().collect()));
                }
                terms.push((-1.0, all));
            }
            Which::S => {
                for party in parties {
                    let rest: BTreeSet<String> = all
                        .iter()
                        .filter(|l| !party.contains(l))
                        .cloned()
                        .collect();
                    terms.push((1.0, rest));
                }
                terms.push((-(m - 1.0), all));
            }
        }
        Self { terms }.merged()
    }

    /// Replaces every `S(T)` by `S(T ∪ E) − S(E)`.
    fn conditioned(&self, e: &[String]) -> Self {
        let extra: BTreeSet<String> = e.iter().cloned().collect();
        let mut terms = Vec::new();
        let mut coeff_sum = 0.0;
        for (c, set) in &self.terms {
            let mut bigger = set.clone();
            bigger.extend(extra.iter().cloned());
            terms.push((*c, bigger));
            coeff_sum += c;
        }
        if coeff_sum.abs() > 0.0 {
            terms.push((-coeff_sum, extra));
        }
        Self { terms }.merged()
    }

    fn merged(self) -> Self {
        let mut terms: Vec<(f64, BTreeSet<String>)> = Vec::new();
        for (c, set) in self.terms {
            if let Some(existing) = terms.iter_mut().find(|(_, s)| *s == set) {
                existing.0 += c;
            } else {
                terms.push((c, set));
            }
        }
        terms.retain(|(c, _)| c.abs() > 0.0);
        Self { terms }
    }

    fn evaluate(&self, sigma: &DensityMatrix) -> Result<f64> {
        let mut total = 0.0;
        for (c, set) in &self.terms {
            let labels: Vec<&String> = set.iter().collect();
            total += c * marginal_entropy(sigma, &labels)?;
        }
        Ok(total)
    }
}

/// One sample for the identity suite: a state, a partition with a nonempty
/// conditioner `E`, and one extra label `X` outside the partition.
#[derive(Clone, Debug)]
pub struct IdentitySample {
    pub state: DensityMatrix,
    pub partition: Partition,
    pub extra: String,
}

/// One identity evaluation on one sample.
#[derive(Clone, Debug)]
pub struct IdentityRecord {
    pub name: &'static str,
    pub sample: usize,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs − rhs`; for one-sided records the requirement is `residual ≥ −tol`.
    pub residual: f64,
    pub one_sided: bool,
}

impl IdentityRecord {
    pub fn holds(&self, tol: f64) -> bool {
        if self.one_sided {
            self.residual >= -tol
        } else {
            self.residual.abs() <= tol
        }
    }
}

/// Outcome of [`identity_suite`]: one record per identity per sample.
#[derive(Clone, Debug)]
pub struct IdentityReport {
    pub records: Vec<IdentityRecord>,
    pub tol: f64,
    pub pass: bool,
}

impl IdentityReport {
    pub fn worst(&self) -> f64 {
        self.records
            .iter()
            .map(|r| {
                if r.one_sided {
                    (-r.residual).max(0.0)
                } else {
                    r.residual.abs()
                }
            })
            .fold(0.0, f64::max)
    }
}

fn single_or_multi_info(rho: &DensityMatrix, parties: &[Vec<String>]) -> Result<f64> {
    // Mutual information of a single set is zero by convention; it keeps the
    // recurrence and complement identities uniform at small arity.
    if parties.len() < 2 {
        return Ok(0.0);
    }
    multi_info_i(rho, &Partition::new(parties.to_vec(), Vec::new())?)
}

fn evaluate_sample(sample: &IdentitySample, index: usize, out: &mut Vec<IdentityRecord>) -> Result<()> {
    let sigma = &sample.state;
    let parties = sample.partition.parties().to_vec();
    let e = sample.partition.conditioner().to_vec();
    let x = vec![sample.extra.clone()];
    if e.is_empty() {
        return Err(Error::BadPartition(
            "identity samples need a nonempty conditioner".into(),
        ));
    }
    if sample.partition.party_labels().contains(&sample.extra) || e.contains(&sample.extra) {
        return Err(Error::BadPartition(
            "the extra label must lie outside the partition".into(),
        ));
    }
    let m = parties.len();
    let base = Partition::new(parties.clone(), Vec::new())?;
    let mut push = |name: &'static str, lhs: f64, rhs: f64, one_sided: bool| {
        out.push(IdentityRecord {
            name,
            sample: index,
            lhs,
            rhs,
            residual: lhs - rhs,
            one_sided,
        });
    };

    // Decomposition into bipartite terms: I(A_1:…:A_m) = Σ_k I(A_k : A_1…A_{k−1}).
    let lhs = multi_info_i(sigma, &base)?;
    let mut rhs = 0.0;
    for k in 1..m {
        let prefix = union(&[&parties[..k].concat()]);
        rhs += bipartite_cmi(sigma, &parties[k], &prefix, &[] as &[String])?;
    }
    push("bipartite-decomposition-I", lhs, rhs, false);

    // Same decomposition with every term conditioned on E.
    let lhs = cond_multi_info(sigma, &sample.partition, Which::I)?;
    let mut rhs = 0.0;
    for k in 1..m {
        let prefix = union(&[&parties[..k].concat()]);
        rhs += bipartite_cmi(sigma, &parties[k], &prefix, &e)?;
    }
    push("bipartite-decomposition-I-conditioned", lhs, rhs, false);

    // Recurrence: I(A_1:…:A_m) = I(A_1:…:A_{m−1}) + I(A_m : A_1…A_{m−1}).
    let lhs = multi_info_i(sigma, &base)?;
    let head = single_or_multi_info(sigma, &parties[..m - 1])?;
    let prefix = parties[..m - 1].concat();
    let rhs = head + bipartite_cmi(sigma, &parties[m - 1], &prefix, &[] as &[String])?;
    push("recurrence-I", lhs, rhs, false);

    // Duality: S_m + I = Σ_i I(A_i : rest).
    let lhs = multi_info_s(sigma, &base)? + multi_info_i(sigma, &base)?;
    let mut rhs = 0.0;
    for (i, party) in parties.iter().enumerate() {
        let rest: Vec<String> = parties
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .flat_map(|(_, p)| p.clone())
            .collect();
        rhs += bipartite_cmi(sigma, party, &rest, &[] as &[String])?;
    }
    push("duality-sum", lhs, rhs, false);

    // Conditioning twice equals conditioning on the union, for both variants.
    for (name, which) in [
        ("conditioning-composes-I", Which::I),
        ("conditioning-composes-S", Which::S),
    ] {
        let joint = union(&[&e, &x]);
        let direct = cond_multi_info(sigma, &sample.partition.with_conditioner(joint)?, which)?;
        let twice = EntropyExpr::multi_info(&parties, which)
            .conditioned(&e)
            .conditioned(&x)
            .evaluate(sigma)?;
        push(name, direct, twice, false);
    }

    // Absorbing X into the first party, I version, split at the conditioning
    // step: I(XA_1:…) = I(A_1:…|X) + Σ_{i≥2} I(X:A_i).
    let mut grown = parties.clone();
    grown[0] = union(&[&x, &parties[0]]);
    let grown_part = Partition::new(grown.clone(), Vec::new())?;
    let lhs = multi_info_i(sigma, &grown_part)?;
    let mut rhs = cond_multi_info(sigma, &base.with_conditioner(x.clone())?, Which::I)?;
    for party in parties.iter().skip(1) {
        rhs += bipartite_cmi(sigma, &x, party, &[] as &[String])?;
    }
    push("absorb-into-party-I-via-conditioning", lhs, rhs, false);

    // Same absorption split along chained conditionals:
    // I(XA_1:…) = I(A_1:…) + Σ_{i≥2} I(X:A_i|A_1…A_{i−1}).
    let mut rhs = multi_info_i(sigma, &base)?;
    for i in 1..m {
        let prefix = parties[..i].concat();
        rhs += bipartite_cmi(sigma, &x, &parties[i], &prefix)?;
    }
    push("absorb-into-party-I-via-chain", lhs, rhs, false);

    // S variant of the absorption, via conditioning:
    // S_m(XA_1:…) = S_m(A_1:…|X) + I(X : A_2…A_m).
    let lhs_s = multi_info_s(sigma, &grown_part)?;
    let tail: Vec<String> = parties[1..].concat();
    let rhs = cond_multi_info(sigma, &base.with_conditioner(x.clone())?, Which::S)?
        + bipartite_cmi(sigma, &x, &tail, &[] as &[String])?;
    push("absorb-into-party-S-via-conditioning", lhs_s, rhs, false);

    // S variant via complements:
    // S_m(XA_1:…) = −I(A_2:…:A_m) + Σ_{i≥2} I(A_i : everything else).
    let mut rhs = -single_or_multi_info(sigma, &parties[1..])?;
    for i in 1..m {
        let others: Vec<String> = grown
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .flat_map(|(_, p)| p.clone())
            .collect();
        rhs += bipartite_cmi(sigma, &parties[i], &others, &[] as &[String])?;
    }
    push("absorb-into-party-S-via-complements", lhs_s, rhs, false);

    // Local conditioning never wins: f(XA_1:…) ≥ f(A_1:…|X).
    let lhs = multi_info_i(sigma, &grown_part)?;
    let rhs = cond_multi_info(sigma, &base.with_conditioner(x.clone())?, Which::I)?;
    push("conditioning-bounded-by-absorption-I", lhs, rhs, true);
    let rhs = cond_multi_info(sigma, &base.with_conditioner(x.clone())?, Which::S)?;
    push("conditioning-bounded-by-absorption-S", lhs_s, rhs, true);

    // Superadditivity instance over a pairing of the available registers:
    // I(A_1A_2 : A_3X | E) ≥ I(A_1:A_3|A_2XE) + I(A_2:X|E).
    if m >= 3 {
        let left = union(&[&parties[0], &parties[1]]);
        let right = union(&[&parties[2], &x]);
        let lhs = bipartite_cmi(sigma, &left, &right, &e)?;
        let inner_cond = union(&[&parties[1], &x, &e]);
        let rhs = bipartite_cmi(sigma, &parties[0], &parties[2], &inner_cond)?
            + bipartite_cmi(sigma, &parties[1], &x, &e)?;
        push("superadditivity-instance", lhs, rhs, true);
    }

    Ok(())
}

/// Evaluates the full identity family on every sample and reports residuals.
///
/// Equalities must hold within `tol`; one-sided records (monotonicity under
/// conditioning, superadditivity) must sit above `−tol`.
pub fn identity_suite(samples: &[IdentitySample], tol: f64) -> Result<IdentityReport> {
    let per_sample: Vec<Result<Vec<IdentityRecord>>> =
        crate::par::map_collect(&samples.iter().enumerate().collect::<Vec<_>>(), |(i, s)| {
            let mut records = Vec::new();
            evaluate_sample(s, *i, &mut records)?;
            Ok(records)
        });
    let mut records = Vec::new();
    for block in per_sample {
        records.extend(block?);
    }
    let pass = records.iter().all(|r| r.holds(tol));
    Ok(IdentityReport { records, tol, pass })
}

/// Residual cross terms of the chain decomposition over paired subsystems.
///
/// For pairs `(A_i, A_i')` and conditioner `E`, the identity splits
/// `f(A_1A_1' : … : A_mA_m' | E)` into the same quantity on the unprimed
/// labels conditioned on all primes, the quantity on the primed labels, and
/// `m` nonnegative cross terms, which are returned:
///
/// * variant `I`: cross term `i` is `I(A_i : primes \ A_i' | A_i' E)`;
/// * variant `S`: cross term `i` is `I(unprimed \ A_i : A_i' | (primes \ A_i') E)`.
pub fn chain_residuals(
    sigma: &DensityMatrix,
    primed_pairs: &[(String, String)],
    e: &[String],
    which: Which,
) -> Result<Vec<f64>> {
    if primed_pairs.len() < 2 {
        return Err(Error::BadPartition("chain decomposition needs at least 2 pairs".into()));
    }
    let unprimed: Vec<Vec<String>> = primed_pairs.iter().map(|(a, _)| vec![a.clone()]).collect();
    let primes: Vec<String> = primed_pairs.iter().map(|(_, p)| p.clone()).collect();
    let mut cross = Vec::with_capacity(primed_pairs.len());
    for (i, (a_i, p_i)) in primed_pairs.iter().enumerate() {
        let other_primes: Vec<String> = primes
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, p)| p.clone())
            .collect();
        let term = match which {
            Which::I => {
                let cond = union(&[&[p_i.clone()], e]);
                bipartite_cmi(sigma, &[a_i.clone()], &other_primes, &cond)?
            }
            Which::S => {
                let other_unprimed: Vec<String> = unprimed
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .flat_map(|(_, p)| p.clone())
                    .collect();
                let cond = union(&[&other_primes, e]);
                bipartite_cmi(sigma, &other_unprimed, &[p_i.clone()], &cond)?
            }
        };
        cross.push(term);
    }
    Ok(cross)
}

/// The two coarse terms of the chain decomposition, for reconstruction
/// checks: the unprimed quantity conditioned on all primes, and the primed
/// quantity.
pub fn chain_main_terms(
    sigma: &DensityMatrix,
    primed_pairs: &[(String, String)],
    e: &[String],
    which: Which,
) -> Result<(f64, f64)> {
    let unprimed: Vec<Vec<String>> = primed_pairs.iter().map(|(a, _)| vec![a.clone()]).collect();
    let primed: Vec<Vec<String>> = primed_pairs.iter().map(|(_, p)| vec![p.clone()]).collect();
    let primes: Vec<String> = primed_pairs.iter().map(|(_, p)| p.clone()).collect();
    let fine = cond_multi_info(
        sigma,
        &Partition::new(unprimed, union(&[&primes, e]))?,
        which,
    )?;
    let coarse = cond_multi_info(sigma, &Partition::new(primed, e.to_vec())?, which)?;
    Ok((fine, coarse))
}

/// Left-hand side of the chain decomposition: the quantity on the paired
/// parties `A_iA_i'` conditioned on `E`.
pub fn chain_lhs(
    sigma: &DensityMatrix,
    primed_pairs: &[(String, String)],
    e: &[String],
    which: Which,
) -> Result<f64> {
    let parties: Vec<Vec<String>> = primed_pairs
        .iter()
        .map(|(a, p)| vec![a.clone(), p.clone()])
        .collect();
    cond_multi_info(sigma, &Partition::new(parties, e.to_vec())?, which)
}

/// Result of a measured-correlation evaluation.
#[derive(Clone, Copy, Debug)]
pub struct MeasuredValue {
    pub bits: f64,
    /// True when the value came from a finite search and therefore only
    /// bounds the supremum over measurements from below.
    pub lower_estimate: bool,
}

/// Search configuration for [`measured_mutual_info`] without fixed bases.
#[derive(Clone, Copy, Debug)]
pub struct MeasuredSearch {
    pub restarts: usize,
    pub max_iters: usize,
    pub seed: u64,
}

impl Default for MeasuredSearch {
    fn default() -> Self {
        Self {
            restarts: 32,
            max_iters: 200,
            seed: 0,
        }
    }
}

/// Measurement specification: explicit orthonormal bases (columns of the
/// matrices) for the two parties, or a seeded local search over projective
/// bases.
pub enum Measurement<'a> {
    Bases { a: &'a CMat, b: &'a CMat },
    Search(MeasuredSearch),
}

fn check_basis(u: &CMat, dim: usize, side: &str) -> Result<()> {
    if u.nrows() != dim || u.ncols() != dim {
        return Err(Error::BadBasis(format!(
            "{side} basis is {}x{}, party dimension is {dim}",
            u.nrows(),
            u.ncols()
        )));
    }
    let gram = u.adjoint() * u;
    let dev = crate::linalg::max_abs_diff(&gram, &CMat::identity(dim, dim));
    if dev > 1e-8 {
        return Err(Error::BadBasis(format!(
            "{side} basis not orthonormal (deviation {dev:.3e})"
        )));
    }
    Ok(())
}

fn outcome_distribution(
    rho: &DensityMatrix,
    a_positions: &[usize],
    b_positions: &[usize],
    u_a: &CMat,
    u_b: &CMat,
) -> Vec<Vec<f64>> {
    // p(i, j) = <a_i b_j| rho |a_i b_j> with the product vector assembled
    // over possibly non-adjacent layout positions.
    let dims = rho.layout().dims();
    let strides = rho.layout().strides();
    let offs_a = crate::state::axis_offsets(&dims, &strides, a_positions);
    let offs_b = crate::state::axis_offsets(&dims, &strides, b_positions);
    let da = u_a.nrows();
    let db = u_b.nrows();
    let m = rho.matrix();
    let mut probs = vec![vec![0.0f64; db]; da];
    let mut vector = vec![crate::linalg::cr(0.0); rho.dim()];
    for i in 0..da {
        for j in 0..db {
            for (ka, &oa) in offs_a.iter().enumerate() {
                for (kb, &ob) in offs_b.iter().enumerate() {
                    vector[oa + ob] = u_a[(ka, i)] * u_b[(kb, j)];
                }
            }
            let mut acc = crate::linalg::cr(0.0);
            for (c, &vc) in vector.iter().enumerate() {
                if vc.norm_sqr() == 0.0 {
                    continue;
                }
                let conj_c = vc.conj();
                for (r, &vr) in vector.iter().enumerate() {
                    if vr.norm_sqr() == 0.0 {
                        continue;
                    }
                    acc += conj_c.conj() * crate::linalg::cr(0.0) + m[(r, c)] * vr.conj() * vc;
                }
            }
            probs[i][j] = acc.re.max(0.0);
        }
    }
    probs
}

fn classical_mi_of(probs: &[Vec<f64>]) -> f64 {
    let h = |p: f64| if p > 1e-15 { -p * p.log2() } else { 0.0 };
    let da = probs.len();
    let db = probs[0].len();
    let mut pa = vec![0.0; da];
    let mut pb = vec![0.0; db];
    let mut joint = 0.0;
    for i in 0..da {
        for j in 0..db {
            pa[i] += probs[i][j];
            pb[j] += probs[i][j];
            joint += h(probs[i][j]);
        }
    }
    pa.iter().map(|&p| h(p)).sum::<f64>() + pb.iter().map(|&p| h(p)).sum::<f64>() - joint
}

/// Classical mutual information of the outcome distribution of local
/// projective measurements on a two-party state.
///
/// With explicit bases the value is exact for those bases; with a search
/// configuration it is the best value found over sampled and locally refined
/// bases — a lower estimate of the measured correlation's supremum.
pub fn measured_mutual_info(
    rho: &DensityMatrix,
    part: &Partition,
    measurement: Measurement<'_>,
) -> Result<MeasuredValue> {
    if part.arity() != 2 || !part.conditioner().is_empty() {
        return Err(Error::BadPartition(
            "measured mutual information needs exactly two parties and no conditioner".into(),
        ));
    }
    part.validate_against(rho.layout())?;
    // Trace away uncovered labels so the measured registers are everything.
    let covered = part.party_labels();
    let uncovered: Vec<String> = rho
        .layout()
        .labels()
        .filter(|l| !covered.iter().any(|c| c == l))
        .map(|s| s.to_string())
        .collect();
    let reduced;
    let rho = if uncovered.is_empty() {
        rho
    } else {
        reduced = partial_trace(rho, &uncovered)?;
        &reduced
    };
    let a_positions = rho.layout().positions(&part.parties()[0])?;
    let b_positions = rho.layout().positions(&part.parties()[1])?;
    let da: usize = a_positions.iter().map(|&p| rho.layout().dims()[p]).product();
    let db: usize = b_positions.iter().map(|&p| rho.layout().dims()[p]).product();

    match measurement {
        Measurement::Bases { a, b } => {
            check_basis(a, da, "first")?;
            check_basis(b, db, "second")?;
            let probs = outcome_distribution(rho, &a_positions, &b_positions, a, b);
            Ok(MeasuredValue {
                bits: classical_mi_of(&probs),
                lower_estimate: false,
            })
        }
        Measurement::Search(search) => {
            let na = da * da;
            let nb = db * db;
            let objective = |params: &[f64]| {
                let u_a = crate::linalg::unitary_from_generator(
                    &crate::linalg::hermitian_from_params(da, &params[..na]),
                );
                let u_b = crate::linalg::unitary_from_generator(
                    &crate::linalg::hermitian_from_params(db, &params[na..]),
                );
                let probs = outcome_distribution(rho, &a_positions, &b_positions, &u_a, &u_b);
                -classical_mi_of(&probs)
            };
            let spec = RestartSpec {
                restarts: search.restarts,
                dim: na + nb,
                seed: search.seed,
                init_scale: 1.5,
                options: NmOptions {
                    max_iters: search.max_iters,
                    ..NmOptions::default()
                },
            };
            // The computational-basis pair is always evaluated as a baseline.
            let baseline = vec![0.0; na + nb];
            let outcome = multi_restart(&objective, &spec, std::slice::from_ref(&baseline));
            Ok(MeasuredValue {
                bits: -outcome.best_value,
                lower_estimate: true,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::cr;
    use crate::sample;
    use crate::state::{tensor, PureState};

    const TOL: f64 = 1e-9;

    fn qubits(labels: &[&str]) -> SystemLayout {
        SystemLayout::uniform(labels.iter().copied(), 2).unwrap()
    }

    fn ghz3() -> DensityMatrix {
        let layout = qubits(&["A", "B", "C"]);
        let mut v = crate::linalg::CVec::zeros(8);
        v[0] = cr(std::f64::consts::FRAC_1_SQRT_2);
        v[7] = cr(std::f64::consts::FRAC_1_SQRT_2);
        PureState::new(layout, v).unwrap().to_density()
    }

    fn bell() -> DensityMatrix {
        let layout = qubits(&["A", "B"]);
        let mut v = crate::linalg::CVec::zeros(4);
        v[0] = cr(std::f64::consts::FRAC_1_SQRT_2);
        v[3] = cr(std::f64::consts::FRAC_1_SQRT_2);
        PureState::new(layout, v).unwrap().to_density()
    }

    #[test]
    fn partition_parse_round_trips() {
        let p = Partition::parse("A,A2:B:C|E").unwrap();
        assert_eq!(p.arity(), 3);
        assert_eq!(p.parties()[0], vec!["A".to_string(), "A2".to_string()]);
        assert_eq!(p.conditioner(), ["E".to_string()]);
        assert_eq!(p.to_string(), "A,A2:B:C|E");
        assert!(Partition::parse("A:B|").is_err());
        assert!(Partition::parse("A").is_err());
        assert!(Partition::parse("A:A").is_err());
    }

    #[test]
    fn both_infos_vanish_on_product_states() {
        let a = sample::density(&qubits(&["A"]), 2, 1);
        let b = sample::density(&qubits(&["B"]), 2, 2);
        let c = sample::density(&qubits(&["C"]), 2, 3);
        let abc = tensor(&tensor(&a, &b).unwrap(), &c).unwrap();
        let part = Partition::singletons(["A", "B", "C"]).unwrap();
        assert!(multi_info_i(&abc, &part).unwrap().abs() < 1e-10);
        assert!(multi_info_s(&abc, &part).unwrap().abs() < 1e-10);
    }

    #[test]
    fn ghz_values_match_entropy_oracle() {
        // Every single-party marginal of the three-qubit GHZ state has
        // entropy 1, every two-party marginal entropy 1, the total 0.
        let ghz = ghz3();
        let part = Partition::singletons(["A", "B", "C"]).unwrap();
        assert!((multi_info_i(&ghz, &part).unwrap() - 3.0).abs() < TOL);
        assert!((multi_info_s(&ghz, &part).unwrap() - 3.0).abs() < TOL);
    }

    #[test]
    fn bell_tensor_pure_qubit_matches_oracle() {
        let c = sample::pure(&qubits(&["C"]), 5).to_density();
        let state = tensor(&bell(), &c).unwrap();
        let part = Partition::singletons(["A", "B", "C"]).unwrap();
        // S(A)=S(B)=1, S(C)=0, S(ABC)=0 -> I = 2; complements give S too.
        assert!((multi_info_i(&state, &part).unwrap() - 2.0).abs() < TOL);
        assert!((multi_info_s(&state, &part).unwrap() - 2.0).abs() < TOL);
    }

    #[test]
    fn bipartite_collapse_of_both_quantities() {
        for seed in 0..20 {
            let rho = sample::density(&qubits(&["A", "B"]), 3, 700 + seed);
            let part = Partition::singletons(["A", "B"]).unwrap();
            let i = multi_info_i(&rho, &part).unwrap();
            let s = multi_info_s(&rho, &part).unwrap();
            let cmi = bipartite_cmi(&rho, &["A"], &["B"], &[] as &[&str]).unwrap();
            assert!((i - s).abs() < 1e-10, "seed {seed}");
            assert!((i - cmi).abs() < 1e-10, "seed {seed}");
        }
    }

    #[test]
    fn party_permutation_leaves_values_unchanged() {
        let rho = sample::density(&qubits(&["A", "B", "C"]), 4, 77);
        let p1 = Partition::singletons(["A", "B", "C"]).unwrap();
        let p2 = Partition::singletons(["C", "A", "B"]).unwrap();
        assert!((multi_info_i(&rho, &p1).unwrap() - multi_info_i(&rho, &p2).unwrap()).abs() < 1e-10);
        assert!((multi_info_s(&rho, &p1).unwrap() - multi_info_s(&rho, &p2).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn conditional_on_product_conditioner_is_unconditional() {
        let rho = sample::density(&qubits(&["A", "B", "C"]), 2, 11);
        let tau = sample::density(&qubits(&["E"]), 2, 12);
        let ext = tensor(&rho, &tau).unwrap();
        let part = Partition::new(
            [vec!["A".into()], vec!["B".into()], vec!["C".into()]],
            vec!["E".to_string()],
        )
        .unwrap();
        let base = Partition::singletons(["A", "B", "C"]).unwrap();
        for which in [Which::I, Which::S] {
            let conditioned = cond_multi_info(&ext, &part, which).unwrap();
            let plain = cond_multi_info(&rho, &base, which).unwrap();
            assert!((conditioned - plain).abs() < 1e-9, "{which}");
        }
    }

    #[test]
    fn classical_copy_conditioner_kills_correlation() {
        // sigma = 1/2 sum_i |iii><iii| ⊗ |i><i|_E: S(A_i E)=1, S(E)=1,
        // S(all E)=1, so both conditional quantities vanish.
        let layout = qubits(&["A", "B", "C", "E"]);
        let mut weights = vec![0.0; 16];
        weights[0b0000] = 0.5;
        weights[0b1111] = 0.5;
        let sigma = crate::state::diagonal_density(layout, &weights);
        let part = Partition::new(
            [vec!["A".into()], vec!["B".into()], vec!["C".into()]],
            vec!["E".to_string()],
        )
        .unwrap();
        assert!(cond_multi_info(&sigma, &part, Which::I).unwrap().abs() < TOL);
        assert!(cond_multi_info(&sigma, &part, Which::S).unwrap().abs() < TOL);
    }

    #[test]
    fn bipartite_cmi_matches_bell_and_markov_oracles() {
        assert!((bipartite_cmi(&bell(), &["A"], &["B"], &[] as &[&str]).unwrap() - 2.0).abs() < TOL);
        let layout = qubits(&["A", "B", "E"]);
        let mut weights = vec![0.0; 8];
        weights[0b000] = 0.5;
        weights[0b111] = 0.5;
        let markov = crate::state::diagonal_density(layout, &weights);
        assert!(bipartite_cmi(&markov, &["A"], &["B"], &["E"]).unwrap().abs() < TOL);
    }

    #[test]
    fn bipartite_cmi_nonnegative_on_random_states() {
        for seed in 0..50 {
            let rho = sample::pure(&qubits(&["A", "B", "E"]), 900 + seed).to_density();
            let v = bipartite_cmi(&rho, &["A"], &["B"], &["E"]).unwrap();
            assert!(v >= -1e-8, "seed {seed}: {v}");
        }
    }

    #[test]
    fn relative_entropy_representation_of_multi_info() {
        for seed in 0..10 {
            let rho = sample::density(&qubits(&["A", "B", "C"]), 3, 40 + seed);
            let part = Partition::singletons(["A", "B", "C"]).unwrap();
            let i = multi_info_i(&rho, &part).unwrap();
            let product = tensor(
                &tensor(
                    &partial_trace(&rho, &["B", "C"]).unwrap(),
                    &partial_trace(&rho, &["A", "C"]).unwrap(),
                )
                .unwrap(),
                &partial_trace(&rho, &["A", "B"]).unwrap(),
            )
            .unwrap();
            let re = crate::state::relative_entropy(&rho, &product).unwrap();
            assert!((i - re).abs() < 1e-7, "seed {seed}: {i} vs {re}");
        }
    }

    #[test]
    fn uncovered_labels_are_traced_out() {
        let rho = sample::density(&qubits(&["A", "B", "X"]), 2, 55);
        let part = Partition::singletons(["A", "B"]).unwrap();
        let direct = multi_info_i(&rho, &part).unwrap();
        let reduced = partial_trace(&rho, &["X"]).unwrap();
        let explicit = multi_info_i(&reduced, &part).unwrap();
        assert!((direct - explicit).abs() < 1e-10);
    }

    #[test]
    fn identity_suite_passes_on_random_states() {
        let layout = qubits(&["A", "B", "C", "X", "E"]);
        let part = Partition::new(
            [vec!["A".into()], vec!["B".into()], vec!["C".into()]],
            vec!["E".to_string()],
        )
        .unwrap();
        let samples: Vec<IdentitySample> = (0..25)
            .map(|seed| IdentitySample {
                state: sample::density(&layout, 3, 1000 + seed),
                partition: part.clone(),
                extra: "X".to_string(),
            })
            .collect();
        let report = identity_suite(&samples, 1e-8).unwrap();
        assert!(report.pass, "worst residual {}", report.worst());
        assert_eq!(report.records.len() / samples.len(), 13);
    }

    #[test]
    fn identity_suite_product_samples_have_zero_absorption_terms() {
        // On a product state, absorbing an uncorrelated X into party 1 adds
        // nothing: both sides coincide with the unconditioned value.
        let a = sample::density(&qubits(&["A"]), 2, 1);
        let b = sample::density(&qubits(&["B"]), 2, 2);
        let x = sample::density(&qubits(&["X"]), 2, 3);
        let e = sample::density(&qubits(&["E"]), 2, 4);
        let state = tensor(&tensor(&tensor(&a, &b).unwrap(), &x).unwrap(), &e).unwrap();
        let part = Partition::new(
            [vec!["A".into()], vec!["B".into()]],
            vec!["E".to_string()],
        )
        .unwrap();
        let samples = vec![IdentitySample {
            state,
            partition: part,
            extra: "X".to_string(),
        }];
        let report = identity_suite(&samples, 1e-9).unwrap();
        assert!(report.pass);
        for record in report
            .records
            .iter()
            .filter(|r| r.name.starts_with("absorb-into-party-I"))
        {
            assert!(record.lhs.abs() < 1e-9, "{}: lhs {}", record.name, record.lhs);
        }
    }

    #[test]
    fn identity_suite_duality_on_pure_four_party_states() {
        let layout = qubits(&["A", "B", "C", "X", "E"]);
        for seed in 0..5 {
            let state = sample::pure(&layout, 2000 + seed).to_density();
            let part = Partition::new(
                [vec!["A".into()], vec!["B".into()], vec!["C".into()], vec!["X".into()]],
                vec!["E".to_string()],
            )
            .unwrap();
            // Duality checked directly on a 4-party grouping: the suite needs
            // an extra label, so evaluate the record's two sides by hand.
            let base = Partition::new(
                part.parties().to_vec(),
                Vec::new(),
            )
            .unwrap();
            let lhs = multi_info_s(&state, &base).unwrap() + multi_info_i(&state, &base).unwrap();
            let mut rhs = 0.0;
            for (i, party) in base.parties().iter().enumerate() {
                let rest: Vec<String> = base
                    .parties()
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .flat_map(|(_, p)| p.clone())
                    .collect();
                rhs += bipartite_cmi(&state, party, &rest, &[] as &[String]).unwrap();
            }
            assert!((lhs - rhs).abs() <= 1e-8, "seed {seed}");
        }
    }

    #[test]
    fn chain_residuals_vanish_on_products() {
        // sigma = rho_{ABE} ⊗ rho'_{A'B'}: the cross terms connect a primed
        // and an unprimed register, so they vanish.
        let rho = sample::density(&qubits(&["A", "B", "E"]), 2, 31);
        let rho2 = sample::density(&qubits(&["Ap", "Bp"]), 2, 32);
        let sigma = tensor(&rho, &rho2).unwrap();
        let pairs = vec![
            ("A".to_string(), "Ap".to_string()),
            ("B".to_string(), "Bp".to_string()),
        ];
        for which in [Which::I, Which::S] {
            let cross = chain_residuals(&sigma, &pairs, &["E".to_string()], which).unwrap();
            for (i, c) in cross.iter().enumerate() {
                assert!(c.abs() < 1e-8, "{which} cross {i}: {c}");
            }
            // Additivity: lhs = fine + coarse exactly on products.
            let lhs = chain_lhs(&sigma, &pairs, &["E".to_string()], which).unwrap();
            let (fine, coarse) = chain_main_terms(&sigma, &pairs, &["E".to_string()], which).unwrap();
            assert!((lhs - fine - coarse).abs() < 1e-8, "{which}");
        }
    }

    #[test]
    fn chain_identity_reconstructs_on_random_states() {
        let layout = qubits(&["A", "B", "C", "Ap", "Bp", "Cp", "E"]);
        let pairs = vec![
            ("A".to_string(), "Ap".to_string()),
            ("B".to_string(), "Bp".to_string()),
            ("C".to_string(), "Cp".to_string()),
        ];
        for seed in 0..10 {
            let sigma = sample::density(&layout, 2, 3000 + seed);
            for which in [Which::I, Which::S] {
                let cross = chain_residuals(&sigma, &pairs, &["E".to_string()], which).unwrap();
                let lhs = chain_lhs(&sigma, &pairs, &["E".to_string()], which).unwrap();
                let (fine, coarse) =
                    chain_main_terms(&sigma, &pairs, &["E".to_string()], which).unwrap();
                let total: f64 = fine + coarse + cross.iter().sum::<f64>();
                assert!(
                    (lhs - total).abs() < 1e-8,
                    "seed {seed} {which}: lhs {lhs} vs sum {total}"
                );
                for c in &cross {
                    assert!(*c >= -1e-8, "seed {seed} {which}: cross {c}");
                }
            }
        }
    }

    #[test]
    fn chain_additivity_of_two_ghz_states() {
        let g1 = ghz3();
        let mut rename = sample::density(&qubits(&["Ap", "Bp", "Cp"]), 1, 0);
        // Build the second GHZ directly on primed labels.
        let layout = qubits(&["Ap", "Bp", "Cp"]);
        let mut v = crate::linalg::CVec::zeros(8);
        v[0] = cr(std::f64::consts::FRAC_1_SQRT_2);
        v[7] = cr(std::f64::consts::FRAC_1_SQRT_2);
        rename = PureState::new(layout, v).unwrap().to_density();
        let sigma = tensor(&g1, &rename).unwrap();
        let pairs = vec![
            ("A".to_string(), "Ap".to_string()),
            ("B".to_string(), "Bp".to_string()),
            ("C".to_string(), "Cp".to_string()),
        ];
        for which in [Which::I, Which::S] {
            let lhs = chain_lhs(&sigma, &pairs, &[], which).unwrap();
            let (fine, coarse) = chain_main_terms(&sigma, &pairs, &[], which).unwrap();
            assert!((lhs - 6.0).abs() < 1e-8, "{which}: lhs {lhs}");
            assert!((fine - 3.0).abs() < 1e-8, "{which}: fine {fine}");
            assert!((coarse - 3.0).abs() < 1e-8, "{which}: coarse {coarse}");
        }
    }

    #[test]
    fn measured_mi_product_state_is_zero() {
        let a = sample::density(&qubits(&["A"]), 2, 8);
        let b = sample::density(&qubits(&["B"]), 2, 9);
        let rho = tensor(&a, &b).unwrap();
        let part = Partition::singletons(["A", "B"]).unwrap();
        let id = CMat::identity(2, 2);
        let v = measured_mutual_info(&rho, &part, Measurement::Bases { a: &id, b: &id }).unwrap();
        assert!(v.bits.abs() < 1e-10);
        assert!(!v.lower_estimate);
    }

    #[test]
    fn measured_mi_bell_computational_is_one_bit() {
        let part = Partition::singletons(["A", "B"]).unwrap();
        let id = CMat::identity(2, 2);
        let v = measured_mutual_info(&bell(), &part, Measurement::Bases { a: &id, b: &id }).unwrap();
        assert!((v.bits - 1.0).abs() < 1e-10);
    }

    #[test]
    fn measured_mi_bell_mutually_unbiased_bases_is_zero() {
        // Z eigenbasis on A, X eigenbasis on B: outcomes are uniform and
        // independent.
        let part = Partition::singletons(["A", "B"]).unwrap();
        let id = CMat::identity(2, 2);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut x = CMat::zeros(2, 2);
        x[(0, 0)] = cr(h);
        x[(1, 0)] = cr(h);
        x[(0, 1)] = cr(h);
        x[(1, 1)] = cr(-h);
        let v = measured_mutual_info(&bell(), &part, Measurement::Bases { a: &id, b: &x }).unwrap();
        assert!(v.bits.abs() < 1e-10, "got {}", v.bits);
    }

    #[test]
    fn measured_mi_search_recovers_bell_correlation() {
        let part = Partition::singletons(["A", "B"]).unwrap();
        let v = measured_mutual_info(
            &bell(),
            &part,
            Measurement::Search(MeasuredSearch {
                restarts: 4,
                max_iters: 60,
                seed: 5,
            }),
        )
        .unwrap();
        assert!(v.lower_estimate);
        assert!(v.bits >= 1.0 - 1e-6, "search found only {}", v.bits);
        assert!(v.bits <= 1.0 + 1e-6, "impossible value {}", v.bits);
    }

    #[test]
    fn measured_mi_rejects_bad_bases() {
        let part = Partition::singletons(["A", "B"]).unwrap();
        let mut bad = CMat::identity(2, 2);
        bad[(0, 0)] = cr(0.5);
        let id = CMat::identity(2, 2);
        assert!(matches!(
            measured_mutual_info(&bell(), &part, Measurement::Bases { a: &bad, b: &id }),
            Err(Error::BadBasis(_))
        ));
    }
}
