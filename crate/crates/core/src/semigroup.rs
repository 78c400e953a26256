//! Numerical semigroups and their combinatorial invariants.

use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};

/// A numerical semigroup `⟨a₁,…,a_r⟩ ⊂ ℕ` with finite complement.
///
/// Membership below the conductor is tabulated; everything at or above the
/// conductor is a member.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NumericalSemigroup {
    generators: Vec<u32>,
    conductor: u32,
    members: Vec<bool>,
    gaps: Vec<u32>,
}

impl NumericalSemigroup {
    /// Builds the semigroup generated by `generators`.
    ///
    /// Duplicates are dropped and the list is sorted. A generator list with
    /// gcd ≠ 1 is rejected rather than rescaled.
    pub fn new(generators: &[i64]) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        if let Some(&bad) = generators.iter().find(|&&g| g < 1 || g > u32::MAX as i64) {
            return Err(Error::NonPositiveGenerator(bad));
        }
        let mut gens: Vec<u32> = generators.iter().map(|&g| g as u32).collect();
        gens.sort_unstable();
        gens.dedup();
        let g = gens.iter().fold(0u64, |acc, &x| acc.gcd(&(x as u64)));
        if g != 1 {
            return Err(Error::NotCoprime(g));
        }

        // Coin-problem closure, stopped once `m` consecutive members appear.
        let m = gens[0] as usize;
        let mut members = vec![true];
        let mut run = 1usize;
        let mut n = 0usize;
        while run < m {
            n += 1;
            let hit = gens
                .iter()
                .any(|&a| (a as usize) <= n && members[n - a as usize]);
            members.push(hit);
            run = if hit { run + 1 } else { 0 };
        }
        // members[n-m+1..=n] are all true
        let conductor = (n + 1 - m) as u32;
        members.truncate(conductor as usize);
        let gaps = (1..conductor).filter(|&k| !members[k as usize]).collect();
        Ok(NumericalSemigroup {
            generators: gens,
            conductor,
            members,
            gaps,
        })
    }

    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    /// Minimal generating system: generators not expressible by the others.
    pub fn minimal_generators(&self) -> Vec<u32> {
        self.generators
            .iter()
            .copied()
            .filter(|&a| !(1..a).any(|s| self.contains(s as i64) && self.contains((a - s) as i64)))
            .collect()
    }

    pub fn contains(&self, n: i64) -> bool {
        if n < 0 {
            false
        } else if n >= self.conductor as i64 {
            true
        } else {
            self.members[n as usize]
        }
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// Frobenius number `F = c − 1`; −1 for `ℕ` itself.
    pub fn frobenius(&self) -> i64 {
        self.conductor as i64 - 1
    }

    pub fn gaps(&self) -> &[u32] {
        &self.gaps
    }

    /// Number of gaps; the delta invariant of the monomial curve.
    pub fn delta(&self) -> u32 {
        self.gaps.len() as u32
    }

    pub fn multiplicity(&self) -> u32 {
        self.generators[0]
    }

    /// Members in `[0, bound)`.
    pub fn members_below(&self, bound: u32) -> Vec<u32> {
        (0..bound).filter(|&n| self.contains(n as i64)).collect()
    }

    /// Apéry set with respect to a positive member `m`: the least member in
    /// each residue class modulo `m`, indexed by residue.
    pub fn apery(&self, m: i64) -> Result<Vec<u32>> {
        if m <= 0 || !self.contains(m) {
            return Err(Error::NotAMember(m));
        }
        let m = m as u32;
        let mut least = vec![None; m as usize];
        let mut found = 0;
        let mut n = 0u32;
        while found < m {
            if self.contains(n as i64) && least[(n % m) as usize].is_none() {
                least[(n % m) as usize] = Some(n);
                found += 1;
            }
            n += 1;
        }
        Ok(least.into_iter().map(|x| x.expect("filled")).collect())
    }

    /// Pseudo-Frobenius numbers: gaps `f` with `f + s ∈ Γ` for every nonzero
    /// member `s`. Checking members up to `c + F` suffices.
    pub fn pseudo_frobenius(&self) -> Vec<i64> {
        if self.conductor == 0 {
            return Vec::new();
        }
        let bound = self.conductor as i64 + self.frobenius();
        let nonzero: Vec<i64> = (1..=bound).filter(|&s| self.contains(s)).collect();
        self.gaps
            .iter()
            .map(|&f| f as i64)
            .filter(|&f| nonzero.iter().all(|&s| self.contains(f + s)))
            .collect()
    }

    /// Cohen–Macaulay type of the semigroup ring. The smooth case ⟨1⟩ has
    /// type 1.
    pub fn semigroup_type(&self) -> u32 {
        if self.conductor == 0 {
            1
        } else {
            self.pseudo_frobenius().len() as u32
        }
    }

    /// `n ∈ Γ ⟺ F − n ∉ Γ` for all `0 ≤ n ≤ F`.
    pub fn is_symmetric(&self) -> bool {
        let f = self.frobenius();
        (0..=f).all(|n| self.contains(n) != self.contains(f - n))
    }
}

impl fmt::Display for NumericalSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(u32::to_string).collect();
        write!(f, "⟨{}⟩", gens.join(","))
    }
}

impl fmt::Debug for NumericalSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NumericalSemigroup{self}")
    }
}

/// Serializable summary of a semigroup's invariants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SemigroupSummary {
    pub generators: Vec<u32>,
    pub minimal_generators: Vec<u32>,
    pub gaps: Vec<u32>,
    pub frobenius: i64,
    pub conductor: u32,
    pub delta: u32,
    pub pseudo_frobenius: Vec<i64>,
    #[serde(rename = "type")]
    pub cm_type: u32,
    pub symmetric: bool,
}

impl From<&NumericalSemigroup> for SemigroupSummary {
    fn from(s: &NumericalSemigroup) -> Self {
        SemigroupSummary {
            generators: s.generators().to_vec(),
            minimal_generators: s.minimal_generators(),
            gaps: s.gaps().to_vec(),
            frobenius: s.frobenius(),
            conductor: s.conductor(),
            delta: s.delta(),
            pseudo_frobenius: s.pseudo_frobenius(),
            cm_type: s.semigroup_type(),
            symmetric: s.is_symmetric(),
        }
    }
}
