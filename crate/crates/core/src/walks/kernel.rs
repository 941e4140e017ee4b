//! Semi-isotropic nearest-neighbour kernels, their class structure and the
//! induced factor walk on the coweight lattice.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Zero};

use crate::building::{gl_to_coweight, BuildingParams, Subspace, Vertex};
use crate::error::{Error, Result};
use crate::scalar::parse_rational;
use crate::{QVector, Rational};

/// One class of neighbours `{ y : d(x,y) = omega_nu, h(y) - h(x) = offset }`.
/// The class `nu = 0` is the stay-put move.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeighborClass {
    pub nu: usize,
    pub offset: Vec<i64>,
    pub count: u64,
    pivots: Vec<usize>,
}

impl NeighborClass {
    /// Pivot set of the subspaces realizing this class (empty for stay-put).
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }
}

/// All nearest-neighbour classes of the building, derived from the
/// subspace cell decomposition. Class sizes do not depend on the vertex;
/// [`count_c`] re-derives them from explicit spheres.
#[derive(Clone, Debug)]
pub struct ClassTable {
    rank: usize,
    classes: Vec<NeighborClass>,
}

impl ClassTable {
    pub fn new(params: &BuildingParams) -> Self {
        let n = params.n();
        let mut classes = vec![NeighborClass { nu: 0, offset: vec![0; params.rank()], count: 1, pivots: Vec::new() }];
        for k in 1..=params.rank() {
            for s in Subspace::pivot_sets(n, k) {
                let offset = gl_to_coweight(&Subspace::gl_offset(n, &s)).to_ints().expect("integral");
                classes.push(NeighborClass { nu: k, offset, count: Subspace::cell_size(&s, params.q()), pivots: s });
            }
        }
        Self { rank: params.rank(), classes }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Stay-put class first, then by `nu` and pivot set.
    pub fn classes(&self) -> &[NeighborClass] {
        &self.classes
    }

    pub fn find(&self, nu: usize, offset: &[i64]) -> Option<&NeighborClass> {
        self.classes.iter().find(|c| c.nu == nu && c.offset == offset)
    }

    pub fn neighbor_count(&self) -> u64 {
        self.classes.iter().filter(|c| c.nu > 0).map(|c| c.count).sum()
    }
}

/// Transition law `p_{nu,mu}` of a semi-isotropic nearest-neighbour walk:
/// the probability of moving to each single neighbour in class `(nu, mu)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SemiIsotropicKernel {
    rank: usize,
    probs: BTreeMap<(usize, Vec<i64>), Rational>,
}

impl SemiIsotropicKernel {
    /// Validates support and total mass `sum p_{nu,mu} c_{nu,mu} = 1`.
    pub fn new(table: &ClassTable, probs: BTreeMap<(usize, Vec<i64>), Rational>) -> Result<Self> {
        let mut total = Rational::zero();
        for ((nu, mu), p) in &probs {
            if *p < Rational::zero() {
                return Err(Error::InvalidConfig(format!("negative probability {p} for nu={nu}")));
            }
            if mu.len() != table.rank() {
                return Err(Error::DimensionMismatch { expected: table.rank(), got: mu.len() });
            }
            let class = table
                .find(*nu, mu)
                .ok_or_else(|| Error::InvalidConfig(format!("nu={nu} mu={mu:?} is not a nearest-neighbour class")))?;
            total += p * Rational::from_integer(class.count as i64);
        }
        if total != Rational::one() {
            return Err(Error::InvalidConfig(format!("kernel mass sum p*c is {total}, expected 1")));
        }
        Ok(Self { rank: table.rank(), probs })
    }

    /// Every neighbour equally likely.
    pub fn isotropic(table: &ClassTable) -> Self {
        let p = Rational::new(1, table.neighbor_count() as i64);
        let probs = table.classes().iter().filter(|c| c.nu > 0).map(|c| ((c.nu, c.offset.clone()), p)).collect();
        Self { rank: table.rank(), probs }
    }

    /// Equal mass on every neighbour class; each `W_0`-orbit of offsets sums
    /// to zero, so the factor walk is drift free.
    pub fn drift_free(table: &ClassTable) -> Self {
        let moving: Vec<&NeighborClass> = table.classes().iter().filter(|c| c.nu > 0).collect();
        let k = moving.len() as i64;
        let probs = moving
            .iter()
            .map(|c| ((c.nu, c.offset.clone()), Rational::new(1, k * c.count as i64)))
            .collect();
        Self { rank: table.rank(), probs }
    }

    pub fn stay_put(table: &ClassTable) -> Self {
        let probs = BTreeMap::from([((0, vec![0; table.rank()]), Rational::one())]);
        Self { rank: table.rank(), probs }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn probabilities(&self) -> &BTreeMap<(usize, Vec<i64>), Rational> {
        &self.probs
    }

    pub fn probability(&self, nu: usize, offset: &[i64]) -> Rational {
        self.probs.get(&(nu, offset.to_vec())).copied().unwrap_or_else(Rational::zero)
    }

    /// Class masses `p_{nu,mu} c_{nu,mu}` in class-table order.
    pub fn class_masses(&self, table: &ClassTable) -> Vec<Rational> {
        table
            .classes()
            .iter()
            .map(|c| self.probability(c.nu, &c.offset) * Rational::from_integer(c.count as i64))
            .collect()
    }

    /// Parses lines `nu=<i> mu=<c1,c2,..> p=<rational>`; `#` starts a comment.
    pub fn parse(text: &str, table: &ClassTable) -> Result<Self> {
        let mut probs = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| Error::Parse(format!("kernel line {}: {msg}: {raw:?}", lineno + 1));
            let (mut nu, mut mu, mut p) = (None, None, None);
            for tok in line.split_whitespace() {
                let (k, v) = tok.split_once('=').ok_or_else(|| err("expected key=value"))?;
                match k {
                    "nu" => nu = Some(v.parse::<usize>().map_err(|_| err("bad nu"))?),
                    "mu" => mu = Some(parse_int_list(v).ok_or_else(|| err("bad mu"))?),
                    "p" => p = Some(parse_rational(v).ok_or_else(|| err("bad p"))?),
                    _ => return Err(err("unknown key")),
                }
            }
            let key = (nu.ok_or_else(|| err("missing nu"))?, mu.ok_or_else(|| err("missing mu"))?);
            if probs.insert(key, p.ok_or_else(|| err("missing p"))?).is_some() {
                return Err(err("duplicate class"));
            }
        }
        Self::new(table, probs)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for ((nu, mu), p) in &self.probs {
            let coords: Vec<String> = mu.iter().map(i64::to_string).collect();
            let _ = writeln!(s, "nu={nu} mu={} p={p}", coords.join(","));
        }
        s
    }

    /// `p-bar(0, mu) = sum_nu p_{nu,mu} c_{nu,mu}`.
    pub fn factor_kernel(&self, table: &ClassTable) -> FactorKernel {
        let mut masses: BTreeMap<Vec<i64>, Rational> = BTreeMap::new();
        for (c, m) in table.classes().iter().zip(self.class_masses(table)) {
            if !m.is_zero() {
                *masses.entry(c.offset.clone()).or_insert_with(Rational::zero) += m;
            }
        }
        FactorKernel { rank: self.rank, masses }
    }
}

fn parse_int_list(s: &str) -> Option<Vec<i64>> {
    let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
    inner.split(',').map(|t| t.trim().parse::<i64>().ok()).collect()
}

/// Translation-invariant walk on the coweight lattice induced on Busemann
/// values: `p-bar(lambda, mu) = masses[mu - lambda]`.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorKernel {
    rank: usize,
    masses: BTreeMap<Vec<i64>, Rational>,
}

impl FactorKernel {
    pub fn from_masses(rank: usize, masses: BTreeMap<Vec<i64>, Rational>) -> Result<Self> {
        let total: Rational = masses.values().copied().sum();
        if total != Rational::one() || masses.values().any(|m| *m < Rational::zero()) {
            return Err(Error::InvalidConfig(format!("factor masses sum to {total}")));
        }
        if masses.keys().any(|k| k.len() != rank) {
            return Err(Error::DimensionMismatch { expected: rank, got: 0 });
        }
        Ok(Self { rank, masses })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn masses(&self) -> &BTreeMap<Vec<i64>, Rational> {
        &self.masses
    }

    pub fn transition(&self, from: &[i64], to: &[i64]) -> Rational {
        let d: Vec<i64> = to.iter().zip(from).map(|(a, b)| a - b).collect();
        self.masses.get(&d).copied().unwrap_or_else(Rational::zero)
    }

    /// Mean increment `sum p-bar(0, nu) nu`.
    pub fn drift(&self) -> QVector {
        let mut acc = vec![Rational::zero(); self.rank];
        for (off, m) in &self.masses {
            for (a, &o) in acc.iter_mut().zip(off) {
                *a += m * Rational::from_integer(o);
            }
        }
        QVector::new(acc)
    }

    /// Law of the `i`-th coordinate increment (1-based), keyed by value.
    pub fn coordinate_law(&self, i: usize) -> BTreeMap<i64, Rational> {
        let mut law = BTreeMap::new();
        for (off, m) in &self.masses {
            *law.entry(off[i - 1]).or_insert_with(Rational::zero) += m;
        }
        law
    }
}

/// `c_{nu,mu}(x)`: number of `y` with `d(x,y) = nu` and `h(y) - h(x) = mu`,
/// by explicit sphere enumeration around `x`.
pub fn count_c(params: &BuildingParams, nu: &QVector, mu: &QVector, x: &Vertex) -> Result<u64> {
    let hist = params.sphere_offsets(x, nu)?;
    let key = mu.to_ints().ok_or_else(|| Error::NotACoweight(mu.to_string()))?;
    Ok(hist.get(&key).copied().unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_factor_kernel() {
        let b = BuildingParams::new(1, 2).unwrap();
        let t = ClassTable::new(&b);
        let f = SemiIsotropicKernel::isotropic(&t).factor_kernel(&t);
        assert_eq!(f.masses()[&vec![-1]], Rational::new(2, 3));
        assert_eq!(f.masses()[&vec![1]], Rational::new(1, 3));
        assert_eq!(f.drift(), QVector::new(vec![Rational::new(-1, 3)]));
        assert!(SemiIsotropicKernel::drift_free(&t).factor_kernel(&t).drift().is_zero());
    }

    #[test]
    fn a2_isotropic_drift() {
        let b = BuildingParams::new(2, 2).unwrap();
        let t = ClassTable::new(&b);
        assert_eq!(t.neighbor_count(), 14);
        let f = SemiIsotropicKernel::isotropic(&t).factor_kernel(&t);
        let d = Rational::new(-3, 14);
        assert_eq!(f.drift(), QVector::new(vec![d, d]));
        assert_eq!(f.transition(&[5, 5], &[4, 5]), f.transition(&[0, 0], &[-1, 0]));
    }

    #[test]
    fn kernel_file_round_trip_and_validation() {
        let b = BuildingParams::new(2, 2).unwrap();
        let t = ClassTable::new(&b);
        let k = SemiIsotropicKernel::isotropic(&t);
        assert_eq!(SemiIsotropicKernel::parse(&k.to_text(), &t).unwrap(), k);
        assert!(SemiIsotropicKernel::parse("nu=1 mu=1,0 p=1/2", &t).is_err());
        assert!(SemiIsotropicKernel::parse("nu=1 mu=2,0 p=1", &t).is_err());
        assert!(SemiIsotropicKernel::parse("nu=1 mu=1,0", &t).is_err());
        let stay = SemiIsotropicKernel::parse("# stay\nnu=0 mu=(0,0) p=1\n", &t).unwrap();
        assert_eq!(stay, SemiIsotropicKernel::stay_put(&t));
    }
}
