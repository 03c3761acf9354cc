use crate::cone::{Cone, MembershipVerdict};
use crate::error::{check_dim, Result};
use crate::numeric::{dot, CMatrix, Scalar};
use crate::quantum::{self, PsdVerdict};

/// Which side of the trace pairing a PSD cone lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    /// Density-matrix coordinates.
    State,
    /// Functional coordinates (off-diagonals doubled).
    Effect,
}

/// A state or effect cone.
///
/// `Psd` is the cone of positive semidefinite `n×n` Hermitian matrices. Its
/// extreme rays form a continuum, so only the designated rays are listed;
/// membership is decided by an exact congruence test instead of an LP.
#[derive(Clone, Debug)]
pub enum ConeModel<S: Scalar> {
    Polyhedral(Cone<S>),
    Psd { n: usize, role: Role, designated: Cone<S> },
}

#[derive(Clone, Debug, PartialEq)]
pub enum ConeVerdict<S> {
    /// Conic weights over the generators.
    Conic(Vec<S>),
    /// `P M P† = diag(pivots)`, pivots nonnegative.
    Gram { congruence: CMatrix<S>, pivots: Vec<S> },
    /// Separating functional: nonnegative on the cone, negative on the point.
    Outside(Vec<S>),
}

impl<S: Scalar> ConeVerdict<S> {
    pub fn is_inside(&self) -> bool {
        !matches!(self, ConeVerdict::Outside(_))
    }

    pub fn witness(&self) -> Option<&[S]> {
        match self {
            ConeVerdict::Outside(w) => Some(w),
            _ => None,
        }
    }

    /// Independent re-check of the certificate.
    pub fn verify(&self, model: &ConeModel<S>, point: &[S]) -> bool {
        match (self, model) {
            (ConeVerdict::Conic(w), ConeModel::Polyhedral(c)) => {
                MembershipVerdict::Inside(w.clone()).verify(c.generators(), point)
            }
            (ConeVerdict::Conic(w), ConeModel::Psd { designated, .. }) => {
                MembershipVerdict::Inside(w.clone()).verify(designated.generators(), point)
            }
            (ConeVerdict::Outside(w), ConeModel::Polyhedral(c)) => {
                MembershipVerdict::Outside(w.clone()).verify(c.generators(), point)
            }
            (ConeVerdict::Gram { congruence, pivots }, ConeModel::Psd { .. }) => {
                let Ok(m) = model.matrix(point) else { return false };
                PsdVerdict::Psd { congruence: congruence.clone(), pivots: pivots.clone() }.verify(&m)
            }
            (ConeVerdict::Outside(w), ConeModel::Psd { n, role, .. }) => {
                if !dot(w, point).is_neg() {
                    return false;
                }
                // the witness must itself be PSD on the other side of the pairing
                let dual_matrix = match role {
                    Role::State => quantum::effect_matrix(*n, w),
                    Role::Effect => quantum::density_matrix(*n, w),
                };
                dual_matrix
                    .and_then(|m| quantum::psd_check(&m))
                    .map(|v| v.is_psd())
                    .unwrap_or(false)
            }
            (ConeVerdict::Gram { .. }, ConeModel::Polyhedral(_)) => false,
        }
    }
}

impl<S: Scalar> ConeModel<S> {
    pub fn psd(n: usize, role: Role, designated: Vec<Vec<S>>) -> Result<Self> {
        Ok(ConeModel::Psd { n, role, designated: Cone::from_extreme_rays(n * n, designated)? })
    }

    pub fn dim(&self) -> usize {
        match self {
            ConeModel::Polyhedral(c) => c.dim(),
            ConeModel::Psd { designated, .. } => designated.dim(),
        }
    }

    /// Explicit generators (the designated rays for PSD cones).
    pub fn generators(&self) -> &[Vec<S>] {
        match self {
            ConeModel::Polyhedral(c) => c.generators(),
            ConeModel::Psd { designated, .. } => designated.generators(),
        }
    }

    /// The listed cone: the cone itself, or the designated sub-cone.
    pub fn listed(&self) -> &Cone<S> {
        match self {
            ConeModel::Polyhedral(c) => c,
            ConeModel::Psd { designated, .. } => designated,
        }
    }

    pub fn is_polyhedral(&self) -> bool {
        matches!(self, ConeModel::Polyhedral(_))
    }

    /// Extreme rays for polyhedral cones; designated rays otherwise.
    pub fn extreme_rays(&self) -> Vec<Vec<S>> {
        match self {
            ConeModel::Polyhedral(c) => c.extreme_rays(),
            ConeModel::Psd { designated, .. } => designated.generators().to_vec(),
        }
    }

    fn matrix(&self, v: &[S]) -> Result<CMatrix<S>> {
        match self {
            ConeModel::Psd { n, role: Role::State, .. } => quantum::density_matrix(*n, v),
            ConeModel::Psd { n, role: Role::Effect, .. } => quantum::effect_matrix(*n, v),
            ConeModel::Polyhedral(_) => unreachable!("matrix view of a polyhedral cone"),
        }
    }

    pub fn membership(&self, v: &[S]) -> Result<ConeVerdict<S>> {
        check_dim(self.dim(), v.len())?;
        match self {
            ConeModel::Polyhedral(c) => Ok(match c.membership(v)? {
                MembershipVerdict::Inside(w) => ConeVerdict::Conic(w),
                MembershipVerdict::Outside(w) => ConeVerdict::Outside(w),
            }),
            ConeModel::Psd { n, role, designated } => {
                if designated.generator_on_ray(v).is_some() {
                    if let Ok(MembershipVerdict::Inside(w)) = designated.membership(v) {
                        return Ok(ConeVerdict::Conic(w));
                    }
                }
                let m = self.matrix(v)?;
                Ok(match quantum::psd_check(&m)? {
                    PsdVerdict::Psd { congruence, pivots } => ConeVerdict::Gram { congruence, pivots },
                    PsdVerdict::NotPsd { vector } => {
                        let p = quantum::projector(&vector);
                        let mut w = match role {
                            Role::State => quantum::effect_coords(&p),
                            Role::Effect => quantum::density_coords(&p),
                        };
                        S::normalize_ray(&mut w);
                        debug_assert_eq!(w.len(), n * n);
                        ConeVerdict::Outside(w)
                    }
                })
            }
        }
    }

    pub fn contains(&self, v: &[S]) -> Result<bool> {
        Ok(self.membership(v)?.is_inside())
    }

    /// Nonzero element of the cone on an extreme ray.
    pub fn is_extreme(&self, v: &[S]) -> Result<bool> {
        match self {
            ConeModel::Polyhedral(c) => c.is_extreme(v),
            ConeModel::Psd { .. } => {
                check_dim(self.dim(), v.len())?;
                let m = self.matrix(v)?;
                Ok(quantum::psd_check(&m)?.rank() == Some(1))
            }
        }
    }

    /// Index of a listed generator on the ray of `v`.
    pub fn lookup(&self, v: &[S]) -> Option<usize> {
        self.listed().generator_on_ray(v)
    }
}
