//! The Kirwan kernel `I_p` degree by degree, computed from intersection pairings.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;

use super::{Cohomology, EquivariantClass};
use crate::algebra::{fmt_rational, linalg, LinearForm, Rational};
use crate::chambers;
use crate::error::{Error, Result};
use crate::model::Space;
use crate::residues::Integrator;

/// Kernel of `κ_p` inside `H_T^d(M)`, in coordinates of the canonical basis.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct DegreeKernel {
    pub degree: u32,
    /// `dim H_T^d(M)`.
    pub dim: usize,
    /// Reduced row-echelon basis of the kernel.
    pub kernel: linalg::Matrix,
}

impl DegreeKernel {
    pub fn kernel_dim(&self) -> usize {
        self.kernel.len()
    }

    /// `dim H^d(M_p)`.
    pub fn image_dim(&self) -> usize {
        self.dim - self.kernel.len()
    }
}

/// The ideal `I_p` in degrees `0..=top_degree`; every class above `top_degree` lies in it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealFingerprint {
    pub rank: usize,
    /// Real dimension of the reduced space.
    pub top_degree: u32,
    pub degrees: Vec<DegreeKernel>,
    census: Vec<usize>,
}

impl IdealFingerprint {
    /// `dim (I_p ∩ H_T^d)`; above the top degree this is all of `H_T^d`.
    pub fn kernel_dim(&self, d: u32) -> usize {
        if d % 2 == 1 {
            return 0;
        }
        match self.degrees.iter().find(|k| k.degree == d) {
            Some(k) => k.kernel_dim(),
            None => super::morse_dimension(&self.census, self.rank, d / 2),
        }
    }

    /// Betti numbers of the reduced space in degrees `0, 2, ..., top_degree`.
    pub fn reduced_betti(&self) -> Vec<usize> {
        self.degrees.iter().map(DegreeKernel::image_dim).collect()
    }

    /// Canonical text form; equal ideals give identical text.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for IdealFingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "top degree {}", self.top_degree)?;
        for k in &self.degrees {
            writeln!(f, "degree {}: dim {}, kernel {}", k.degree, k.dim, k.kernel_dim())?;
            for row in &k.kernel {
                let cells: Vec<String> = row.iter().map(fmt_rational).collect();
                writeln!(f, "  [{}]", cells.join(", "))?;
            }
        }
        Ok(())
    }
}

/// Shared state for ideal computations on one space: cached bases, polarization and seed.
#[derive(Debug)]
pub struct IdealEngine<'a> {
    pub cohomology: Cohomology<'a>,
    pub xi: LinearForm,
    pub seed: u64,
}

impl<'a> IdealEngine<'a> {
    pub fn new(space: &'a Space, xi: Option<LinearForm>, seed: u64) -> Result<Self> {
        let cohomology = Cohomology::new(space)?;
        let xi = xi.unwrap_or_else(|| space.generic_vector(seed));
        Ok(IdealEngine { cohomology, xi, seed })
    }

    pub fn space(&self) -> &'a Space {
        self.cohomology.space()
    }

    pub fn integrator(&self, p: &LinearForm) -> Result<Integrator<'a>> {
        Integrator::new(self.space(), p, &self.xi, self.seed)
    }

    pub fn top_degree(&self) -> u32 {
        self.space().reduced_dim() as u32
    }

    /// `M[a][b] = ∫_{M_p} κ_p(A_a B_b)` over the bases of degrees `d` and `D - d`.
    pub fn pairing_matrix(&self, integ: &Integrator<'_>, d: u32) -> Result<linalg::Matrix> {
        let top = self.top_degree();
        if d > top || d % 2 == 1 {
            return Err(Error::InvalidArgument(format!("pairing degree {d} outside 0..={top}")));
        }
        let a = self.cohomology.basis(d)?;
        let b = self.cohomology.basis(top - d)?;
        let cells: Vec<(usize, usize)> = (0..a.len()).flat_map(|i| (0..b.len()).map(move |j| (i, j))).collect();
        let values: Vec<Result<Rational>> = cells
            .par_iter()
            .map(|&(i, j)| {
                let v = integ.integrate(&a.classes[i].mul(&b.classes[j]))?;
                if !v.im.is_zero() {
                    return Err(Error::InvalidArgument(format!("pairing value {v} is not real")));
                }
                Ok(v.re)
            })
            .collect();
        let mut m = vec![vec![Rational::zero(); b.len()]; a.len()];
        for ((i, j), v) in cells.into_iter().zip(values) {
            m[i][j] = v?;
        }
        Ok(m)
    }

    pub fn fingerprint(&self, p: &LinearForm) -> Result<IdealFingerprint> {
        let integ = self.integrator(p)?;
        let top = self.top_degree();
        let mut degrees = Vec::new();
        for d in (0..=top).step_by(2) {
            let m = self.pairing_matrix(&integ, d)?;
            let dim = self.cohomology.dimension(d);
            let ncols = m.first().map_or(0, Vec::len);
            let kernel = linalg::nullspace(&linalg::transpose(&m, ncols), dim);
            degrees.push(DegreeKernel { degree: d, dim, kernel });
        }
        Ok(IdealFingerprint { rank: self.space().rank, top_degree: top, degrees, census: self.cohomology.census().to_vec() })
    }

    /// True if the homogeneous class lies in `I_p`.
    pub fn in_ideal(&self, cls: &EquivariantClass, p: &LinearForm) -> Result<bool> {
        if cls.is_zero() {
            return Ok(true);
        }
        let d = cls.degree().ok_or_else(|| Error::InvalidArgument("class is not homogeneous".into()))?;
        let top = self.top_degree();
        if d > top {
            return Ok(true);
        }
        let integ = self.integrator(p)?;
        let b = self.cohomology.basis(top - d)?;
        for other in &b.classes {
            if !integ.integrate(&cls.mul(other))?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Pairing matrix between degrees `d` and `D - d` at `p`.
pub fn pairing_matrix(space: &Space, p: &LinearForm, d: u32, xi: &LinearForm, seed: u64) -> Result<linalg::Matrix> {
    let engine = IdealEngine::new(space, Some(xi.clone()), seed)?;
    let integ = engine.integrator(p)?;
    engine.pairing_matrix(&integ, d)
}

pub fn fingerprint(space: &Space, p: &LinearForm, xi: &LinearForm, seed: u64) -> Result<IdealFingerprint> {
    IdealEngine::new(space, Some(xi.clone()), seed)?.fingerprint(p)
}

pub fn in_ideal(space: &Space, cls: &EquivariantClass, p: &LinearForm, xi: &LinearForm, seed: u64) -> Result<bool> {
    IdealEngine::new(space, Some(xi.clone()), seed)?.in_ideal(cls, p)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChamberSample {
    pub chamber: usize,
    pub point: LinearForm,
    pub fingerprint: IdealFingerprint,
}

/// Chamber count from geometry next to the number of distinct ideals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChamberCount {
    pub geometric: usize,
    pub by_ideals: usize,
    pub samples: Vec<ChamberSample>,
}

impl ChamberCount {
    pub fn agrees(&self) -> bool {
        self.geometric == self.by_ideals
    }
}

/// Fingerprints one interior point per chamber and counts the distinct ideals.
pub fn count_chambers_by_ideals(space: &Space, xi: Option<LinearForm>, seed: u64) -> Result<ChamberCount> {
    let arr = chambers::arrangement(space)?;
    let engine = IdealEngine::new(space, xi, seed)?;
    let mut samples = Vec::new();
    for c in 0..arr.num_chambers() {
        let point = arr.sample_point(c);
        debug_assert_eq!(arr.locate(&point), Ok(c));
        let fingerprint = engine.fingerprint(&point)?;
        samples.push(ChamberSample { chamber: c, point, fingerprint });
    }
    let distinct: BTreeSet<String> = samples.iter().map(|s| s.fingerprint.to_text()).collect();
    Ok(ChamberCount { geometric: arr.num_chambers(), by_ideals: distinct.len(), samples })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::generators;

    #[test]
    fn cp2_point_reduction() {
        let s = generators::cp2();
        let p = LinearForm::new(vec![rat(1, 4), rat(1, 4)]);
        let fp = fingerprint(&s, &p, &LinearForm::from_ints(&[1, 3]), 0).unwrap();
        assert_eq!(fp.top_degree, 0);
        assert_eq!(fp.kernel_dim(0), 0);
        assert_eq!(fp.kernel_dim(2), 3);
        let m = pairing_matrix(&s, &p, 0, &LinearForm::from_ints(&[1, 3]), 0).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m[0][0].clone() * m[0][0].clone(), rat(1, 1));
    }

    #[test]
    fn sphere_fingerprint() {
        let s = generators::sphere();
        let fp = fingerprint(&s, &LinearForm::new(vec![rat(1, 2)]), &LinearForm::from_ints(&[1]), 0).unwrap();
        assert_eq!(fp.degrees.len(), 1);
        assert_eq!(fp.kernel_dim(0), 0);
        assert_eq!(fp.kernel_dim(2), 2);
    }

    #[test]
    fn su3_reduced_spaces_are_spheres() {
        let s = generators::su3(1, 1).unwrap();
        let count = count_chambers_by_ideals(&s, None, 0).unwrap();
        assert_eq!(count.geometric, 6);
        assert!(count.agrees());
        for sample in &count.samples {
            assert_eq!(sample.fingerprint.reduced_betti(), vec![1, 1]);
        }
    }
}
