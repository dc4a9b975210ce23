//! Splitting-prime experiments: scans of completely split and semi-split
//! primes, separability sweeps, the Frobenius orbit law, the generating-set
//! criterion for irreducibility over a field `K`, and the search for a
//! witness modulus whose unit group the split primes fail to generate.
//!
//! Every scan runs over the odd primary primes of norm `<= bound` through
//! [`Exec::map`], so output order is the prime listing order regardless of
//! the execution strategy.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::gaussint::{factor, primes_up_to_norm, GaussInt, GaussPrime};
use crate::gfq::ResidueField;
use crate::residue::{Normalization, Residue, ResidueRing, UnitGroup, MAX_GROUP_NORM};
use crate::zipoly::PolyZi;

fn require_monic(h: &PolyZi) -> Result<()> {
    if h.degree().unwrap_or(0) == 0 || !h.is_monic() {
        return Err(Error::invalid(format!("expected a monic polynomial of positive degree, got {h}")));
    }
    Ok(())
}

/// Discriminant of a monic polynomial, rejecting zero.
fn nonzero_discriminant(h: &PolyZi) -> Result<GaussInt> {
    require_monic(h)?;
    let d = h.discriminant()?;
    if d.is_zero() {
        return Err(Error::invalid(format!("{h} has zero discriminant")));
    }
    Ok(d)
}

/// Odd primes up to `bound` split by whether they divide `disc`.
fn scan_primes(bound: u64, disc: &GaussInt) -> (Vec<GaussPrime>, Vec<GaussInt>) {
    let mut kept = Vec::new();
    let mut skipped = Vec::new();
    if bound >= 2 {
        skipped.push(GaussInt::one_plus_i());
    }
    for p in primes_up_to_norm(bound, true) {
        if p.value.divides(disc) {
            skipped.push(p.value.clone());
        } else {
            kept.push(p);
        }
    }
    (kept, skipped)
}

/// The set P of odd primes modulo which `poly` splits into distinct linear factors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplittingReport {
    pub poly: PolyZi,
    pub bound: u64,
    pub primes: Vec<GaussInt>,
    /// `1+i` and the odd primes dividing the discriminant.
    pub skipped: Vec<GaussInt>,
}

pub fn splitting_primes(h: &PolyZi, bound: u64, exec: Exec) -> Result<SplittingReport> {
    let disc = nonzero_discriminant(h)?;
    let (candidates, skipped) = scan_primes(bound, &disc);
    let split = exec.map(&candidates, |p| {
        let k = ResidueField::new(p).expect("odd prime");
        k.reduce_poly(h).splits_completely()
    });
    let primes = candidates.iter().zip(split).filter(|(_, s)| *s).map(|(p, _)| p.value.clone()).collect();
    Ok(SplittingReport { poly: h.clone(), bound, primes, skipped })
}

/// Odd primes with a residue-degree-one prime above them in `K = Q(i)[X]/(g)`,
/// detected as a root of `g` modulo π for π not dividing `disc(g)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemisplitReport {
    pub poly: PolyZi,
    pub bound: u64,
    pub primes: Vec<GaussInt>,
    pub skipped: Vec<GaussInt>,
}

pub fn semisplit_primes(g: &PolyZi, bound: u64, exec: Exec) -> Result<SemisplitReport> {
    let disc = nonzero_discriminant(g)?;
    let (candidates, skipped) = scan_primes(bound, &disc);
    let hit = exec.map(&candidates, |p| ResidueField::new(p).expect("odd prime").reduce_poly(g).has_root());
    let primes = candidates.iter().zip(hit).filter(|(_, h)| *h).map(|(p, _)| p.value.clone()).collect();
    Ok(SemisplitReport { poly: g.clone(), bound, primes, skipped })
}

/// Odd primes of norm `<= bound` not dividing `beta`.
fn primes_coprime_to(beta: &GaussInt, bound: u64) -> Vec<GaussPrime> {
    primes_up_to_norm(bound, true).into_iter().filter(|p| !p.value.divides(beta)).collect()
}

/// Separability of `Λ_β` modulo every odd prime not dividing β.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prop1Report {
    pub beta: GaussInt,
    pub bound: u64,
    pub checked: usize,
    pub counterexamples: Vec<GaussInt>,
    pub passed: bool,
}

pub fn verify_prop1(beta: &GaussInt, lambda: &PolyZi, bound: u64, exec: Exec) -> Result<Prop1Report> {
    require_monic(lambda)?;
    let primes = primes_coprime_to(beta, bound);
    let ok = exec.map(&primes, |p| ResidueField::new(p).expect("odd prime").reduce_poly(lambda).is_squarefree());
    let counterexamples: Vec<GaussInt> =
        primes.iter().zip(&ok).filter(|(_, ok)| !**ok).map(|(p, _)| p.value.clone()).collect();
    Ok(Prop1Report {
        beta: beta.clone(),
        bound,
        checked: primes.len(),
        passed: counterexamples.is_empty(),
        counterexamples,
    })
}

/// Factor degrees of `Λ_β` modulo π against the order of π's primary class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitCheck {
    pub pi: GaussInt,
    pub class: String,
    pub class_order: u64,
    pub degrees: Vec<u32>,
    pub consistent: bool,
}

pub fn frobenius_orbit_check(group: &UnitGroup, lambda: &PolyZi, pi: &GaussPrime) -> Result<OrbitCheck> {
    use crate::residue::FiniteAbelianGroup;
    let ring = group.ring();
    let class = ring.class_of(&pi.value, Normalization::Primary)?;
    let order = group.element_order(class);
    let degrees = ResidueField::new(pi)?.reduce_poly(lambda).factor_degrees()?;
    let consistent = degrees.iter().all(|&d| d as u64 == order);
    Ok(OrbitCheck { pi: pi.value.clone(), class: class.to_string(), class_order: order, degrees, consistent })
}

/// The orbit law over every odd prime of norm `<= bound` not dividing β.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub beta: GaussInt,
    pub bound: u64,
    pub checked: usize,
    pub exceptions: Vec<OrbitCheck>,
}

pub fn orbit_law_scan(beta: &GaussInt, lambda: &PolyZi, bound: u64, exec: Exec) -> Result<OrbitReport> {
    let group = UnitGroup::new(ResidueRing::new(beta)?)?;
    let primes = primes_coprime_to(beta, bound);
    let checks = exec.map(&primes, |p| frobenius_orbit_check(&group, lambda, p));
    let mut exceptions = Vec::new();
    for c in checks {
        let c = c?;
        if !c.consistent {
            exceptions.push(c);
        }
    }
    Ok(OrbitReport { beta: group.ring().modulus().clone(), bound, checked: primes.len(), exceptions })
}

/// Complete splitting of `Λ_β` modulo π against `primary(π) = 1 mod 2(1+i)β`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplittingLawReport {
    pub beta: GaussInt,
    pub bound: u64,
    pub checked: usize,
    pub split_count: usize,
    pub exceptions: Vec<GaussInt>,
}

pub fn splitting_law_scan(beta: &GaussInt, lambda: &PolyZi, bound: u64, exec: Exec) -> Result<SplittingLawReport> {
    let modulus = &GaussInt::new(2, 2) * beta;
    let primes = primes_coprime_to(beta, bound);
    let rows = exec.map(&primes, |p| {
        let splits = ResidueField::new(p).expect("odd prime").reduce_poly(lambda).splits_completely();
        let predicted = modulus.divides(&(&p.value - &GaussInt::one()));
        (splits, predicted)
    });
    let split_count = rows.iter().filter(|(s, _)| *s).count();
    let exceptions = primes.iter().zip(&rows).filter(|(_, (s, p))| s != p).map(|(p, _)| p.value.clone()).collect();
    Ok(SplittingLawReport { beta: beta.clone(), bound, checked: primes.len(), split_count, exceptions })
}

/// Classes of the given primes in `(R/βR)*`. In raw mode each prime
/// contributes the classes of all four of its associates, since each of them
/// is a prime element lying in some residue class.
pub fn prime_classes(ring: &ResidueRing, primes: &[GaussInt], normalization: Normalization) -> Vec<Residue> {
    let mut out = std::collections::BTreeSet::new();
    for p in primes {
        if p.divides(ring.modulus()) {
            continue;
        }
        match normalization {
            Normalization::Primary => {
                out.insert(ring.class_of(p, Normalization::Primary).expect("odd and coprime"));
            }
            Normalization::Raw => {
                for u in GaussInt::units() {
                    out.insert(ring.class_of(&(&u * p), Normalization::Raw).expect("coprime"));
                }
            }
        }
    }
    out.into_iter().collect()
}

const BOUND_CAVEAT: &str = "a proper subgroup at this bound may grow at larger bounds; a full-group verdict is final";

/// Whether the classes of the semi-split primes of `K` generate `(R/βR)*`,
/// which suffices for `Λ_β` to stay irreducible over `K`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prop2Report {
    pub poly: PolyZi,
    pub beta: GaussInt,
    pub bound: u64,
    pub normalization: Normalization,
    pub semisplit_count: usize,
    pub classes: Vec<String>,
    pub group_order: u64,
    pub subgroup_order: u64,
    pub criterion_satisfied: bool,
    pub note: String,
}

pub fn prop2_evidence(
    g: &PolyZi,
    beta: &GaussInt,
    bound: u64,
    normalization: Normalization,
    exec: Exec,
) -> Result<Prop2Report> {
    let group = UnitGroup::new(ResidueRing::new(beta)?)?;
    let semi = semisplit_primes(g, bound, exec)?;
    let classes = prime_classes(group.ring(), &semi.primes, normalization);
    let sub = group.subgroup_generated(&classes)?;
    use crate::residue::FiniteAbelianGroup;
    let satisfied = sub.order == group.order();
    Ok(Prop2Report {
        poly: g.clone(),
        beta: group.ring().modulus().clone(),
        bound,
        normalization,
        semisplit_count: semi.primes.len(),
        classes: classes.iter().map(|c| c.to_string()).collect(),
        group_order: group.order(),
        subgroup_order: sub.order,
        criterion_satisfied: satisfied,
        note: if satisfied { "criterion met".into() } else { BOUND_CAVEAT.into() },
    })
}

/// What to do when the discriminant is even.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiscriminantPolicy {
    /// Reject even discriminants as input errors.
    #[default]
    RequireOdd,
    /// Search over the odd prime divisors of the discriminant anyway.
    AllowEven,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub beta: GaussInt,
    pub group_order: u64,
    pub subgroup_order: u64,
    pub witness: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub poly: PolyZi,
    pub disc: GaussInt,
    pub bound: u64,
    pub normalization: Normalization,
    pub discriminant_policy: DiscriminantPolicy,
    pub exponent_bound: u32,
    pub norm_cap: u64,
    pub split_prime_count: usize,
    pub candidates: Vec<Candidate>,
    pub witnesses: Vec<GaussInt>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Copy)]
pub struct TheoremSearch {
    pub bound: u64,
    pub exponent_bound: u32,
    pub norm_cap: u64,
    pub normalization: Normalization,
    pub policy: DiscriminantPolicy,
}

impl Default for TheoremSearch {
    fn default() -> Self {
        TheoremSearch {
            bound: 5000,
            exponent_bound: 2,
            norm_cap: 10_000,
            normalization: Normalization::Primary,
            policy: DiscriminantPolicy::RequireOdd,
        }
    }
}

/// Products `Π π_i^{e_i}` over the primary odd prime divisors of `disc`,
/// `1 <= Σ e_i`, `e_i <= e_max`, norm at most `cap`.
fn candidate_moduli(disc: &GaussInt, e_max: u32, cap: u64) -> Result<Vec<GaussInt>> {
    let primes: Vec<GaussPrime> = factor(disc)?.factors.into_iter().map(|(p, _)| p).filter(|p| p.is_odd()).collect();
    let mut out: Vec<(GaussInt, u64)> = vec![(GaussInt::one(), 1)];
    for p in &primes {
        let mut next = Vec::new();
        for (b, n) in &out {
            let (mut b, mut n) = (b.clone(), *n);
            next.push((b.clone(), n));
            for _ in 0..e_max {
                n = match n.checked_mul(p.norm) {
                    Some(m) if m <= cap => m,
                    _ => break,
                };
                b = &b * &p.value;
                next.push((b.clone(), n));
            }
        }
        out = next;
    }
    let mut betas: Vec<GaussInt> = out.into_iter().filter(|(b, _)| !b.is_one()).map(|(b, _)| b).collect();
    betas.sort_by(|a, b| a.listing_cmp(b));
    Ok(betas)
}

/// Searches moduli built from the discriminant's primes for one whose unit
/// group is not generated by the classes of the completely split primes of
/// `h`. Such a modulus has a class containing no split prime in every
/// generating set.
pub fn theorem_search(h: &PolyZi, params: TheoremSearch, exec: Exec) -> Result<TheoremReport> {
    let disc = nonzero_discriminant(h)?;
    let mut notes = Vec::new();
    if !disc.is_odd() {
        match params.policy {
            DiscriminantPolicy::RequireOdd => {
                return Err(Error::invalid(format!("discriminant {disc} is even; the witness search needs an odd one")))
            }
            DiscriminantPolicy::AllowEven => {
                notes.push(format!("discriminant {disc} is even; searching its odd prime divisors only"));
            }
        }
    }
    let split = splitting_primes(h, params.bound, exec)?;
    let moduli = candidate_moduli(&disc, params.exponent_bound, params.norm_cap.min(MAX_GROUP_NORM))?;
    let mut candidates = Vec::new();
    for beta in moduli {
        use crate::residue::FiniteAbelianGroup;
        let group = UnitGroup::new(ResidueRing::new(&beta)?)?;
        let classes = prime_classes(group.ring(), &split.primes, params.normalization);
        let sub = group.subgroup_generated(&classes)?;
        candidates.push(Candidate {
            beta,
            group_order: group.order(),
            subgroup_order: sub.order,
            witness: sub.order < group.order(),
        });
    }
    let witnesses: Vec<GaussInt> = candidates.iter().filter(|c| c.witness).map(|c| c.beta.clone()).collect();
    if candidates.is_empty() {
        notes.push("the discriminant has no odd prime divisor, so there are no candidates".into());
    }
    if !witnesses.is_empty() {
        notes.push(BOUND_CAVEAT.into());
    }
    Ok(TheoremReport {
        poly: h.clone(),
        disc,
        bound: params.bound,
        normalization: params.normalization,
        discriminant_policy: params.policy,
        exponent_bound: params.exponent_bound,
        norm_cap: params.norm_cap,
        split_prime_count: split.primes.len(),
        candidates,
        witnesses,
        notes,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub poly: PolyZi,
    pub bound: u64,
    pub count_p: usize,
    pub count_all_odd: usize,
    pub ratio: f64,
    /// `1/deg`, the split density when the splitting field has degree `deg`
    /// (true for the abelian lemnatomic polynomials). Not enforced.
    pub galois_expectation: f64,
}

pub fn density_report(h: &PolyZi, bound: u64, exec: Exec) -> Result<DensityReport> {
    let split = splitting_primes(h, bound, exec)?;
    let all = primes_up_to_norm(bound, true).len();
    let deg = h.degree().expect("monic of positive degree");
    Ok(DensityReport {
        poly: h.clone(),
        bound,
        count_p: split.primes.len(),
        count_all_odd: all,
        ratio: if all == 0 { 0.0 } else { split.primes.len() as f64 / all as f64 },
        galois_expectation: 1.0 / deg as f64,
    })
}
