//! Random RIS channels and cascaded path coefficients.
//!
//! Channel entries are circularly-symmetric complex Gaussian with unit total
//! variance. The generator is `ChaCha8Rng` seeded through
//! `SeedableRng::seed_from_u64`; entries are drawn column by column, first
//! all of `h_T` (one column per transmit antenna) and then all of `h_R`
//! (one column per user), real part before imaginary part.

use std::path::Path;

use nalgebra::{Complex, DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nulling::PhaseShiftVector;

pub type C64 = Complex<f64>;

/// One draw of the transmitter→RIS and RIS→receiver channels.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    /// G×L, column `j` is the channel from antenna `j` to the RIS.
    h_t: DMatrix<C64>,
    /// G×K, column `k` is the channel from the RIS to user `k`.
    h_r: DMatrix<C64>,
    seed: u64,
}

/// Cascaded coefficient vector of the path antenna `j` → RIS → user `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct CascadeVector {
    pub user: usize,
    pub antenna: usize,
    pub a: DVector<C64>,
}

/// Draws an `(L, K, G)` channel deterministically from `seed`.
pub fn draw_channel(num_antennas: usize, num_users: usize, num_units: usize, seed: u64) -> Result<ChannelRealization> {
    if num_antennas == 0 || num_users == 0 || num_units == 0 {
        return Err(Error::InvalidParameter(format!(
            "channel dimensions must be positive (L={num_antennas}, K={num_users}, G={num_units})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let mut sample = || {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        C64::new(re * scale, im * scale)
    };
    // from_fn fills column-major, which fixes the draw order documented above.
    let h_t = DMatrix::from_fn(num_units, num_antennas, |_, _| sample());
    let h_r = DMatrix::from_fn(num_units, num_users, |_, _| sample());
    Ok(ChannelRealization { h_t, h_r, seed })
}

impl ChannelRealization {
    /// Builds a realization from explicit matrices (G×L and G×K).
    pub fn from_matrices(h_t: DMatrix<C64>, h_r: DMatrix<C64>, seed: u64) -> Result<Self> {
        if h_t.nrows() != h_r.nrows() {
            return Err(Error::LengthMismatch {
                expected: h_t.nrows(),
                got: h_r.nrows(),
            });
        }
        if h_t.nrows() == 0 || h_t.ncols() == 0 || h_r.ncols() == 0 {
            return Err(Error::InvalidParameter("channel matrices must be non-empty".into()));
        }
        if h_t.iter().chain(h_r.iter()).any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParameter("channel entries must be finite".into()));
        }
        Ok(Self { h_t, h_r, seed })
    }

    pub fn num_antennas(&self) -> usize {
        self.h_t.ncols()
    }

    pub fn num_users(&self) -> usize {
        self.h_r.ncols()
    }

    pub fn num_units(&self) -> usize {
        self.h_t.nrows()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn h_t(&self) -> &DMatrix<C64> {
        &self.h_t
    }

    pub fn h_r(&self) -> &DMatrix<C64> {
        &self.h_r
    }

    fn check_indices(&self, user: usize, antenna: usize) -> Result<()> {
        if user >= self.num_users() {
            return Err(Error::IndexOutOfRange {
                what: "user",
                index: user,
                bound: self.num_users(),
            });
        }
        if antenna >= self.num_antennas() {
            return Err(Error::IndexOutOfRange {
                what: "antenna",
                index: antenna,
                bound: self.num_antennas(),
            });
        }
        Ok(())
    }

    /// `a[g] = h_T[g, antenna] * h_R[g, user]` (0-based indices).
    pub fn cascade_vector(&self, user: usize, antenna: usize) -> Result<CascadeVector> {
        self.check_indices(user, antenna)?;
        let a = self.h_t.column(antenna).component_mul(&self.h_r.column(user));
        Ok(CascadeVector { user, antenna, a })
    }

    /// Effective scalar gain `aᵀv` of one path (plain transpose, no conjugate).
    pub fn effective_gain(&self, v: &PhaseShiftVector, user: usize, antenna: usize) -> Result<C64> {
        self.check_indices(user, antenna)?;
        if v.len() != self.num_units() {
            return Err(Error::LengthMismatch {
                expected: self.num_units(),
                got: v.len(),
            });
        }
        let t = self.h_t.column(antenna);
        let r = self.h_r.column(user);
        Ok(v.as_vector()
            .iter()
            .enumerate()
            .map(|(g, vg)| t[g] * r[g] * vg)
            .sum())
    }

    /// K×L matrix of effective gains `a_{k,j}ᵀ v` for all paths.
    pub fn effective_channel(&self, v: &PhaseShiftVector) -> Result<DMatrix<C64>> {
        if v.len() != self.num_units() {
            return Err(Error::LengthMismatch {
                expected: self.num_units(),
                got: v.len(),
            });
        }
        // H_eff[k, j] = sum_g h_R[g,k] v[g] h_T[g,j]
        let mut weighted = self.h_r.clone();
        for (g, vg) in v.as_vector().iter().enumerate() {
            for x in weighted.row_mut(g).iter_mut() {
                *x *= vg;
            }
        }
        Ok(weighted.transpose() * &self.h_t)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&ChannelFile::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ChannelFile = serde_json::from_str(text)?;
        file.try_into()
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}

/// On-disk JSON layout; matrices are column-major lists of `[re, im]`.
#[derive(Debug, Serialize, Deserialize)]
struct ChannelFile {
    #[serde(rename = "L")]
    l: usize,
    #[serde(rename = "K")]
    k: usize,
    #[serde(rename = "G")]
    g: usize,
    seed: u64,
    #[serde(rename = "h_T")]
    h_t: Vec<[f64; 2]>,
    #[serde(rename = "h_R")]
    h_r: Vec<[f64; 2]>,
}

impl From<&ChannelRealization> for ChannelFile {
    fn from(ch: &ChannelRealization) -> Self {
        let flat = |m: &DMatrix<C64>| m.iter().map(|z| [z.re, z.im]).collect();
        ChannelFile {
            l: ch.num_antennas(),
            k: ch.num_users(),
            g: ch.num_units(),
            seed: ch.seed,
            h_t: flat(&ch.h_t),
            h_r: flat(&ch.h_r),
        }
    }
}

impl TryFrom<ChannelFile> for ChannelRealization {
    type Error = Error;

    fn try_from(f: ChannelFile) -> Result<Self> {
        let unflat = |name: &str, data: &[[f64; 2]], cols: usize| -> Result<DMatrix<C64>> {
            if data.len() != f.g * cols {
                return Err(Error::Parse(format!(
                    "{name} has {} entries, expected {}",
                    data.len(),
                    f.g * cols
                )));
            }
            Ok(DMatrix::from_iterator(
                f.g,
                cols,
                data.iter().map(|[re, im]| C64::new(*re, *im)),
            ))
        };
        let h_t = unflat("h_T", &f.h_t, f.l)?;
        let h_r = unflat("h_R", &f.h_r, f.k)?;
        ChannelRealization::from_matrices(h_t, h_r, f.seed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes_and_finiteness() {
        let ch = draw_channel(2, 2, 4, 7).unwrap();
        assert_eq!(ch.h_t().shape(), (4, 2));
        assert_eq!(ch.h_r().shape(), (4, 2));
        assert!(ch.h_t().iter().all(|z| z.re.is_finite() && z.im.is_finite()));

        let big = draw_channel(10, 10, 300, 11).unwrap();
        assert_eq!(big.h_t().shape(), (300, 10));
        assert_eq!(big.h_r().shape(), (300, 10));
    }

    #[test]
    fn seeded_draws_repeat() {
        assert_eq!(draw_channel(3, 4, 16, 99).unwrap(), draw_channel(3, 4, 16, 99).unwrap());
        assert_ne!(draw_channel(3, 4, 16, 99).unwrap(), draw_channel(3, 4, 16, 100).unwrap());
    }

    #[test]
    fn zero_dimension_rejected() {
        assert!(draw_channel(0, 1, 1, 0).is_err());
    }

    #[test]
    fn unit_variance() {
        let ch = draw_channel(50, 50, 1000, 3).unwrap();
        let entries: Vec<C64> = ch.h_t().iter().chain(ch.h_r().iter()).copied().collect();
        let n = entries.len() as f64;
        let power = entries.iter().map(|z| z.norm_sqr()).sum::<f64>() / n;
        let re_var = entries.iter().map(|z| z.re * z.re).sum::<f64>() / n;
        assert!(n >= 1e5);
        assert!((power - 1.0).abs() < 0.05, "power {power}");
        assert!((re_var - 0.5).abs() < 0.025, "re variance {re_var}");
    }

    #[test]
    fn cascade_identity_and_zero_masks() {
        let w = DVector::from_vec(vec![C64::new(1.0, 2.0), C64::new(-0.5, 0.1), C64::new(3.0, 0.0)]);
        let ones = DMatrix::from_element(3, 1, C64::new(1.0, 0.0));
        let h_r = DMatrix::from_columns(&[w.clone()]);
        let ch = ChannelRealization::from_matrices(ones, h_r.clone(), 0).unwrap();
        assert_eq!(ch.cascade_vector(0, 0).unwrap().a, w);

        let zeros = DMatrix::from_element(3, 1, C64::new(0.0, 0.0));
        let ch = ChannelRealization::from_matrices(zeros, h_r, 0).unwrap();
        assert!(ch.cascade_vector(0, 0).unwrap().a.iter().all(|z| *z == C64::new(0.0, 0.0)));
    }

    #[test]
    fn cascade_matches_scalar_products() {
        let ch = draw_channel(3, 5, 32, 21).unwrap();
        for k in 0..5 {
            for j in 0..3 {
                let a = ch.cascade_vector(k, j).unwrap().a;
                for g in 0..32 {
                    assert_eq!(a[g], ch.h_t()[(g, j)] * ch.h_r()[(g, k)]);
                }
            }
        }
    }

    #[test]
    fn cascade_index_errors_name_the_index() {
        let ch = draw_channel(2, 3, 4, 1).unwrap();
        let err = ch.cascade_vector(3, 0).unwrap_err().to_string();
        assert!(err.contains("user index 3"), "{err}");
        let err = ch.cascade_vector(0, 5).unwrap_err().to_string();
        assert!(err.contains("antenna index 5"), "{err}");
    }

    #[test]
    fn effective_gain_scalar_and_direct_sum() {
        let h_t = DMatrix::from_element(1, 1, C64::new(2.0, 0.0));
        let h_r = DMatrix::from_element(1, 1, C64::new(1.0, 0.0));
        let ch = ChannelRealization::from_matrices(h_t, h_r, 0).unwrap();
        let v = PhaseShiftVector::ones(1);
        assert_eq!(ch.effective_gain(&v, 0, 0).unwrap(), C64::new(2.0, 0.0));

        let ch = draw_channel(2, 2, 16, 5).unwrap();
        let v = PhaseShiftVector::random(16, 8);
        let a = ch.cascade_vector(1, 0).unwrap().a;
        let mut direct = C64::new(0.0, 0.0);
        for g in 0..16 {
            direct += a[g] * v.as_vector()[g];
        }
        let got = ch.effective_gain(&v, 1, 0).unwrap();
        assert!((got - direct).norm() < 1e-12);

        let eff = ch.effective_channel(&v).unwrap();
        assert!((eff[(1, 0)] - direct).norm() < 1e-12);

        let short = PhaseShiftVector::ones(15);
        assert!(matches!(ch.effective_gain(&short, 0, 0), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn json_round_trip() {
        let ch = draw_channel(2, 3, 5, 42).unwrap();
        let back = ChannelRealization::from_json(&ch.to_json().unwrap()).unwrap();
        assert_eq!(ch, back);
        assert!(ChannelRealization::from_json(r#"{"L":1,"K":1,"G":2,"seed":0,"h_T":[[1,0]],"h_R":[[1,0],[0,1]]}"#).is_err());
    }
}
