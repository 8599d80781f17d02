//! Composite Hilbert space of one atomic ion, one molecular ion, and their
//! shared motional mode, truncated at `n_max` Fock states.

use num_complex::Complex64;
use thiserror::Error;

/// Amplitudes below this magnitude are suppressed in debug dumps.
pub const DUMP_EPS: f64 = 1e-12;
/// Norm drift tolerated before a state is considered corrupted.
pub const NORM_TOL: f64 = 1e-12;

/// Electronic qubit levels of the atomic ion. `S` fluoresces during
/// detection, `D` is dark.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AtomLevel {
    S,
    D,
}

impl AtomLevel {
    pub(crate) fn index(self) -> usize {
        match self {
            AtomLevel::S => 0,
            AtomLevel::D => 1,
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            AtomLevel::S => "S",
            AtomLevel::D => "D",
        }
    }
}

/// Molecular levels participating in the protocols: the two Zeeman sublevels
/// m = -3/2, -5/2 of the upper rotational state and the ground rotational
/// state. `Leaked` marks a molecule that left this manifold; it is a
/// classical flag, never superposed with the coherent levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MolLevel {
    Minus32,
    Minus52,
    Zero,
    Leaked,
}

impl MolLevel {
    /// Index within the coherent part of the basis; `None` for `Leaked`.
    pub(crate) fn coherent_index(self) -> Option<usize> {
        match self {
            MolLevel::Minus32 => Some(0),
            MolLevel::Minus52 => Some(1),
            MolLevel::Zero => Some(2),
            MolLevel::Leaked => None,
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            MolLevel::Minus32 => "-3/2",
            MolLevel::Minus52 => "-5/2",
            MolLevel::Zero => "0",
            MolLevel::Leaked => "leaked",
        }
    }
}

pub const COHERENT_MOL_LEVELS: [MolLevel; 3] = [MolLevel::Minus32, MolLevel::Minus52, MolLevel::Zero];

/// One basis ket |atom, mol, n>.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisLabel {
    pub atom: AtomLevel,
    pub mol: MolLevel,
    pub n: usize,
}

#[derive(Debug, Error, PartialEq)]
pub enum HilbertError {
    #[error("motional index {n} outside truncation (n_max = {n_max})")]
    MotionTruncation { n: usize, n_max: usize },
    #[error("leaked molecule has no coherent basis index")]
    LeakedBasis,
    #[error("dimension mismatch: {left} vs {right} amplitudes")]
    DimensionMismatch { left: usize, right: usize },
    #[error("state norm {norm} too far from 1")]
    NormDrift { norm: f64 },
    #[error("projection has zero probability")]
    EmptyProjection,
}

/// Dense state vector over the truncated composite basis, ordered
/// lexicographically by (atom, mol, n). The ordering is fixed so serialized
/// states stay comparable across runs.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_max: usize,
    amps: Vec<Complex64>,
    leaked: bool,
}

impl StateVector {
    /// Basis state |atom, mol, n> with unit amplitude.
    pub fn basis(atom: AtomLevel, mol: MolLevel, n: usize, n_max: usize) -> Result<Self, HilbertError> {
        if n >= n_max {
            return Err(HilbertError::MotionTruncation { n, n_max });
        }
        let mol_idx = mol.coherent_index().ok_or(HilbertError::LeakedBasis)?;
        let mut amps = vec![Complex64::ZERO; 2 * 3 * n_max];
        amps[Self::index_parts(atom.index(), mol_idx, n, n_max)] = Complex64::ONE;
        Ok(StateVector { n_max, amps, leaked: false })
    }

    /// Superposition from per-label amplitudes. The result must be
    /// normalized within `NORM_TOL`.
    pub fn from_amplitudes(
        n_max: usize,
        amp: impl Fn(AtomLevel, MolLevel, usize) -> Complex64,
    ) -> Result<Self, HilbertError> {
        let mut amps = vec![Complex64::ZERO; 2 * 3 * n_max];
        for atom in [AtomLevel::S, AtomLevel::D] {
            for (mol_idx, &mol) in COHERENT_MOL_LEVELS.iter().enumerate() {
                for n in 0..n_max {
                    amps[Self::index_parts(atom.index(), mol_idx, n, n_max)] = amp(atom, mol, n);
                }
            }
        }
        let state = StateVector { n_max, amps, leaked: false };
        state.check_norm()?;
        Ok(state)
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    /// Whether the molecule has left the coherent manifold. Once set, pulses
    /// become no-ops and molecular detection reports `other`.
    pub fn is_leaked(&self) -> bool {
        self.leaked
    }

    pub fn mark_leaked(&mut self) {
        self.leaked = true;
    }

    fn index_parts(atom_idx: usize, mol_idx: usize, n: usize, n_max: usize) -> usize {
        (atom_idx * 3 + mol_idx) * n_max + n
    }

    pub(crate) fn index(&self, atom: AtomLevel, mol: MolLevel, n: usize) -> Result<usize, HilbertError> {
        if n >= self.n_max {
            return Err(HilbertError::MotionTruncation { n, n_max: self.n_max });
        }
        let mol_idx = mol.coherent_index().ok_or(HilbertError::LeakedBasis)?;
        Ok(Self::index_parts(atom.index(), mol_idx, n, self.n_max))
    }

    pub fn amplitude(&self, atom: AtomLevel, mol: MolLevel, n: usize) -> Result<Complex64, HilbertError> {
        Ok(self.amps[self.index(atom, mol, n)?])
    }

    pub(crate) fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn amps_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    /// Label for a raw amplitude index.
    pub(crate) fn label_of(&self, idx: usize) -> BasisLabel {
        let n = idx % self.n_max;
        let rest = idx / self.n_max;
        let mol = COHERENT_MOL_LEVELS[rest % 3];
        let atom = if rest / 3 == 0 { AtomLevel::S } else { AtomLevel::D };
        BasisLabel { atom, mol, n }
    }

    /// <self|other>.
    pub fn inner_product(&self, other: &StateVector) -> Result<Complex64, HilbertError> {
        if self.dim() != other.dim() {
            return Err(HilbertError::DimensionMismatch { left: self.dim(), right: other.dim() });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Total probability on labels matched by `predicate`.
    pub fn population(&self, predicate: impl Fn(&BasisLabel) -> bool) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| predicate(&self.label_of(*i)))
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Probability currently sitting on the truncation boundary n = n_max - 1.
    pub fn boundary_population(&self) -> f64 {
        self.population(|l| l.n == self.n_max - 1)
    }

    /// Collapse onto the labels matched by `predicate`, renormalizing.
    /// Returns the pre-collapse probability of the retained subspace.
    pub fn project(&mut self, predicate: impl Fn(&BasisLabel) -> bool) -> Result<f64, HilbertError> {
        let mut kept = 0.0;
        for i in 0..self.amps.len() {
            if predicate(&self.label_of(i)) {
                kept += self.amps[i].norm_sqr();
            } else {
                self.amps[i] = Complex64::ZERO;
            }
        }
        if kept <= 0.0 {
            return Err(HilbertError::EmptyProjection);
        }
        let scale = 1.0 / kept.sqrt();
        for a in &mut self.amps {
            *a *= scale;
        }
        Ok(kept)
    }

    pub fn check_norm(&self) -> Result<(), HilbertError> {
        let norm = self.norm();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(HilbertError::NormDrift { norm });
        }
        Ok(())
    }

    /// Plain-text dump, one `atom,mol,n,re,im` line per occupied basis state;
    /// amplitudes below `DUMP_EPS` are suppressed.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (i, a) in self.amps.iter().enumerate() {
            if a.norm() < DUMP_EPS {
                continue;
            }
            let l = self.label_of(i);
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                l.atom.token(),
                l.mol.token(),
                l.n,
                a.re,
                a.im
            ));
        }
        if self.leaked {
            out.push_str("leaked\n");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_state_has_unit_amplitude_on_its_label() {
        let s = StateVector::basis(AtomLevel::S, MolLevel::Minus32, 0, 8).unwrap();
        assert_eq!(s.amplitude(AtomLevel::S, MolLevel::Minus32, 0).unwrap(), Complex64::ONE);
        assert!((s.norm() - 1.0).abs() < 1e-15);

        let d = StateVector::basis(AtomLevel::D, MolLevel::Zero, 0, 8).unwrap();
        assert_eq!(d.amplitude(AtomLevel::D, MolLevel::Zero, 0).unwrap(), Complex64::ONE);
    }

    #[test]
    fn motional_index_outside_truncation_is_rejected() {
        let err = StateVector::basis(AtomLevel::S, MolLevel::Minus32, 8, 8).unwrap_err();
        assert_eq!(err, HilbertError::MotionTruncation { n: 8, n_max: 8 });
    }

    #[test]
    fn leaked_is_not_a_basis_label() {
        let err = StateVector::basis(AtomLevel::S, MolLevel::Leaked, 0, 8).unwrap_err();
        assert_eq!(err, HilbertError::LeakedBasis);
    }

    #[test]
    fn basis_states_are_orthonormal() {
        let n_max = 4;
        let mut kets = Vec::new();
        for atom in [AtomLevel::S, AtomLevel::D] {
            for mol in COHERENT_MOL_LEVELS {
                for n in 0..n_max {
                    kets.push(StateVector::basis(atom, mol, n, n_max).unwrap());
                }
            }
        }
        assert_eq!(kets.len(), 2 * 3 * n_max, "basis size must be 2*3*n_max");
        for (i, a) in kets.iter().enumerate() {
            for (j, b) in kets.iter().enumerate() {
                let ip = a.inner_product(b).unwrap();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (ip - Complex64::new(expect, 0.0)).norm() < 1e-15,
                    "<{i}|{j}> = {ip}"
                );
            }
        }
    }

    #[test]
    fn inner_product_rejects_mismatched_truncation() {
        let a = StateVector::basis(AtomLevel::S, MolLevel::Minus32, 0, 8).unwrap();
        let b = StateVector::basis(AtomLevel::S, MolLevel::Minus32, 0, 4).unwrap();
        assert!(matches!(
            a.inner_product(&b),
            Err(HilbertError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn population_partitions_sum_to_one() {
        let mut s = StateVector::basis(AtomLevel::S, MolLevel::Minus32, 0, 8).unwrap();
        // Build an arbitrary superposition by hand.
        let i1 = s.index(AtomLevel::D, MolLevel::Minus52, 3).unwrap();
        let i2 = s.index(AtomLevel::S, MolLevel::Zero, 1).unwrap();
        s.amps_mut()[i1] = Complex64::new(0.0, 0.5);
        s.amps_mut()[i2] = Complex64::new(-0.5, 0.0);
        let scale = 1.0 / s.norm();
        for a in s.amps_mut() {
            *a *= scale;
        }

        let ps = s.population(|l| l.atom == AtomLevel::S);
        let pd = s.population(|l| l.atom == AtomLevel::D);
        assert!((ps + pd - 1.0).abs() < 1e-15);

        let by_mol: f64 = COHERENT_MOL_LEVELS
            .iter()
            .map(|&m| s.population(|l| l.mol == m))
            .sum();
        assert!((by_mol - 1.0).abs() < 1e-15);
    }

    #[test]
    fn projection_collapses_and_renormalizes() {
        let mut s = StateVector::basis(AtomLevel::S, MolLevel::Minus32, 0, 8).unwrap();
        let i1 = s.index(AtomLevel::D, MolLevel::Minus52, 0).unwrap();
        s.amps_mut()[i1] = Complex64::ONE;
        let scale = 1.0 / s.norm();
        for a in s.amps_mut() {
            *a *= scale;
        }
        let p = s.project(|l| l.atom == AtomLevel::D).unwrap();
        assert!((p - 0.5).abs() < 1e-15);
        assert!((s.norm() - 1.0).abs() < 1e-15);
        assert!((s.population(|l| l.atom == AtomLevel::D) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn empty_projection_is_an_error() {
        let mut s = StateVector::basis(AtomLevel::S, MolLevel::Minus32, 0, 8).unwrap();
        assert_eq!(
            s.project(|l| l.atom == AtomLevel::D).unwrap_err(),
            HilbertError::EmptyProjection
        );
    }

    #[test]
    fn dump_lists_occupied_labels_and_suppresses_noise() {
        let mut s = StateVector::basis(AtomLevel::S, MolLevel::Minus32, 0, 8).unwrap();
        let i1 = s.index(AtomLevel::D, MolLevel::Minus52, 2).unwrap();
        s.amps_mut()[i1] = Complex64::new(1e-14, 0.0); // below DUMP_EPS
        let text = s.dump();
        assert_eq!(text, "S,-3/2,0,1,0\n");
    }

    #[test]
    fn label_roundtrip_covers_every_index() {
        let s = StateVector::basis(AtomLevel::S, MolLevel::Minus32, 0, 5).unwrap();
        for idx in 0..s.dim() {
            let l = s.label_of(idx);
            assert_eq!(s.index(l.atom, l.mol, l.n).unwrap(), idx);
        }
    }
}
