//! Computable invariants of finitely presented groups: abelianization via
//! Smith normal form and homomorphism counts into small finite groups.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::finite_group::{builtin_table, FiniteGroupError, FiniteGroupTable};
use crate::presentation::Presentation;
use crate::snf::{smith_normal_form, IntMatrix};

/// Default cap on the number of generator assignments tried by [`hom_count`].
pub const DEFAULT_MAX_EVALS: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("homomorphism count needs {needed} assignments ({order}^{gens}), over the budget of {budget}")]
    BudgetExceeded {
        order: usize,
        gens: usize,
        needed: String,
        budget: u64,
    },
    #[error(transparent)]
    Group(#[from] FiniteGroupError),
}

/// Exponent-sum matrix: one row per relator, one column per generator in
/// alphabet order.
pub fn relation_matrix(p: &Presentation) -> IntMatrix {
    let gens: Vec<_> = p.alphabet().ids().collect();
    let rows: Vec<Vec<BigInt>> = p
        .relators()
        .iter()
        .map(|r| gens.iter().map(|&g| BigInt::from(r.exponent_sum(g))).collect())
        .collect();
    IntMatrix::from_rows(gens.len(), &rows)
}

/// `Z^free_rank x Z/d1 x Z/d2 x ...` with `d1 | d2 | ...` and every `d_i >= 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    pub torsion_factors: Vec<BigInt>,
}

impl AbelianInvariants {
    /// Order of the group, or `None` when it is infinite.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.torsion_factors.iter().product())
    }

    pub fn is_infinite_cyclic(&self) -> bool {
        self.free_rank == 1 && self.torsion_factors.is_empty()
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion_factors.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" x "))
        }
    }
}

pub fn abelianization(p: &Presentation) -> AbelianInvariants {
    let snf = smith_normal_form(&relation_matrix(p));
    let diag = snf.d.diagonal();
    let nonzero = diag.iter().filter(|d| !d.is_zero()).count();
    AbelianInvariants {
        free_rank: p.generator_count() - nonzero,
        torsion_factors: diag
            .into_iter()
            .filter(|d| !d.is_zero() && !d.is_one())
            .map(|d| d.abs())
            .collect(),
    }
}

/// Number of homomorphisms from the presented group into `table`, by brute
/// force over all generator assignments. Fails rather than truncating when
/// `order^generators` exceeds `max_evals`.
pub fn hom_count(
    p: &Presentation,
    table: &FiniteGroupTable,
    max_evals: u64,
) -> Result<u64, InvariantError> {
    let order = table.order();
    let k = p.generator_count();
    let needed = BigInt::from(order).pow(k as u32);
    if needed > BigInt::from(max_evals) {
        return Err(InvariantError::BudgetExceeded {
            order,
            gens: k,
            needed: needed.to_string(),
            budget: max_evals,
        });
    }
    // relators as (alphabet position, exponent) runs
    let compiled: Vec<Vec<(usize, i64)>> = p
        .relators()
        .iter()
        .map(|r| {
            r.syllables()
                .iter()
                .map(|s| (p.alphabet().position(s.gen).expect("relators use the alphabet"), s.exp))
                .collect()
        })
        .collect();
    if k == 0 {
        return Ok(1);
    }
    let holds = |assignment: &[usize]| {
        compiled.iter().all(|r| {
            r.iter().fold(table.identity(), |acc, &(pos, e)| {
                table.mul(acc, table.pow(assignment[pos], e))
            }) == table.identity()
        })
    };
    // split on the image of the first generator; each worker runs an odometer
    let count = (0..order)
        .into_par_iter()
        .map(|first| {
            let mut assignment = vec![0usize; k];
            assignment[0] = first;
            let mut n = 0u64;
            loop {
                if holds(&assignment) {
                    n += 1;
                }
                let mut pos = k - 1;
                loop {
                    if pos == 0 {
                        return n;
                    }
                    assignment[pos] += 1;
                    if assignment[pos] < order {
                        break;
                    }
                    assignment[pos] = 0;
                    pos -= 1;
                }
            }
        })
        .sum();
    Ok(count)
}

/// Abelian invariants plus homomorphism counts into a list of target groups.
/// Equal profiles are necessary for isomorphism, never sufficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantProfile {
    pub abelian: AbelianInvariants,
    pub hom_counts: Vec<(String, u64)>,
}

pub const PROFILE_HEADER: &str =
    "# invariant profile: unequal profiles prove non-isomorphism; equal profiles prove nothing";

impl InvariantProfile {
    pub fn hom_count(&self, target: &str) -> Option<u64> {
        self.hom_counts
            .iter()
            .find(|(name, _)| name == target)
            .map(|&(_, c)| c)
    }

    /// `key: value` lines under a header comment.
    pub fn to_human(&self) -> String {
        let mut out = format!("{PROFILE_HEADER}\nabelian: {}\n", self.abelian);
        for (name, count) in &self.hom_counts {
            out.push_str(&format!("hom {name}: {count}\n"));
        }
        out
    }

    /// Flat `key<TAB>value` lines.
    pub fn to_kv(&self) -> String {
        let torsion: Vec<String> = self
            .abelian
            .torsion_factors
            .iter()
            .map(|d| d.to_string())
            .collect();
        let mut out = format!(
            "abelian\t{}\nfree_rank\t{}\ntorsion\t{}\n",
            self.abelian,
            self.abelian.free_rank,
            torsion.join(",")
        );
        for (name, count) in &self.hom_counts {
            out.push_str(&format!("hom.{name}\t{count}\n"));
        }
        out
    }
}

pub fn invariant_profile(
    p: &Presentation,
    targets: &[&str],
    max_evals: u64,
) -> Result<InvariantProfile, InvariantError> {
    let mut hom_counts = Vec::with_capacity(targets.len());
    for &name in targets {
        let table = builtin_table(name)?;
        hom_counts.push((name.to_string(), hom_count(p, &table, max_evals)?));
    }
    Ok(InvariantProfile {
        abelian: abelianization(p),
        hom_counts,
    })
}
