use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer wavevector. One-dimensional grids use only the first component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WaveVector(pub [i32; 3]);

impl WaveVector {
    pub fn components(&self) -> [i32; 3] {
        self.0
    }

    pub fn euclid_norm_sq(&self) -> i64 {
        self.0.iter().map(|&k| (k as i64) * (k as i64)).sum()
    }

    pub fn euclid_norm(&self) -> f64 {
        (self.euclid_norm_sq() as f64).sqrt()
    }

    /// The `|D|` multiplier, `sum |k_i|`.
    pub fn l1_norm(&self) -> u32 {
        self.0.iter().map(|k| k.unsigned_abs()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0 == [0, 0, 0]
    }

    pub fn neg(&self) -> WaveVector {
        WaveVector([-self.0[0], -self.0[1], -self.0[2]])
    }

    pub fn as_f64(&self) -> [f64; 3] {
        [self.0[0] as f64, self.0[1] as f64, self.0[2] as f64]
    }
}

impl fmt::Display for WaveVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.0[0], self.0[1], self.0[2])
    }
}

/// How quadratic products are protected from aliasing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DealiasRule {
    /// Products are formed on a grid zero-padded by 3/2, which removes all
    /// aliasing for quadratic terms on the retained band.
    ThreeHalvesPadding,
}

impl DealiasRule {
    pub fn tag(&self) -> &'static str {
        match self {
            DealiasRule::ThreeHalvesPadding => "3/2-padding",
        }
    }
}

#[derive(Debug)]
struct GridData {
    dims: usize,
    n: usize,
    kmax: i32,
    modes: Vec<WaveVector>,
    norm_sq: Vec<f64>,
    norm: Vec<f64>,
    l1: Vec<u32>,
    physical_pos: Vec<usize>,
    padded_n: usize,
    padded_pos: Vec<usize>,
}

/// Truncated Fourier lattice `{k : |k_i| <= n/2 - 1}` in one or three
/// dimensions. Wavevectors are stored in lexicographic order, so the mirror
/// of index `i` is `len - 1 - i` and the zero mode sits in the middle.
#[derive(Clone)]
pub struct GridSpec {
    inner: Arc<GridData>,
}

impl fmt::Debug for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GridSpec")
            .field("dims", &self.inner.dims)
            .field("n", &self.inner.n)
            .finish()
    }
}

impl PartialEq for GridSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.dims == other.inner.dims && self.inner.n == other.inner.n)
    }
}

impl Eq for GridSpec {}

fn position(k: &WaveVector, dims: usize, n: usize) -> usize {
    let wrap = |c: i32| -> usize { c.rem_euclid(n as i32) as usize };
    let c = k.0;
    match dims {
        1 => wrap(c[0]),
        _ => (wrap(c[0]) * n + wrap(c[1])) * n + wrap(c[2]),
    }
}

impl GridSpec {
    pub fn new(dims: usize, n: usize) -> Result<Self> {
        if dims != 1 && dims != 3 {
            return Err(Error::InvalidGrid(format!("dims must be 1 or 3, got {dims}")));
        }
        if n < 4 || !n.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!("n must be even and >= 4, got {n}")));
        }
        let kmax = (n / 2 - 1) as i32;
        let range: Vec<i32> = (-kmax..=kmax).collect();
        let mut modes = Vec::with_capacity(range.len().pow(dims as u32));
        if dims == 1 {
            modes.extend(range.iter().map(|&k| WaveVector([k, 0, 0])));
        } else {
            for &a in &range {
                for &b in &range {
                    for &c in &range {
                        modes.push(WaveVector([a, b, c]));
                    }
                }
            }
        }
        let padded_n = 3 * n / 2;
        let norm_sq: Vec<f64> = modes.iter().map(|k| k.euclid_norm_sq() as f64).collect();
        let norm = norm_sq.iter().map(|s| s.sqrt()).collect();
        let l1 = modes.iter().map(WaveVector::l1_norm).collect();
        let physical_pos = modes.iter().map(|k| position(k, dims, n)).collect();
        let padded_pos = modes.iter().map(|k| position(k, dims, padded_n)).collect();
        Ok(Self {
            inner: Arc::new(GridData {
                dims,
                n,
                kmax,
                modes,
                norm_sq,
                norm,
                l1,
                physical_pos,
                padded_n,
                padded_pos,
            }),
        })
    }

    pub fn dims(&self) -> usize {
        self.inner.dims
    }

    pub fn n(&self) -> usize {
        self.inner.n
    }

    /// Largest retained `|k_i|`.
    pub fn kmax(&self) -> i32 {
        self.inner.kmax
    }

    pub fn dealias_rule(&self) -> DealiasRule {
        DealiasRule::ThreeHalvesPadding
    }

    /// Number of retained wavevectors (including the zero mode).
    pub fn len(&self) -> usize {
        self.inner.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.modes.is_empty()
    }

    pub fn wavevectors(&self) -> &[WaveVector] {
        &self.inner.modes
    }

    pub fn wavevector(&self, idx: usize) -> WaveVector {
        self.inner.modes[idx]
    }

    pub fn zero_index(&self) -> usize {
        self.len() / 2
    }

    /// Index of `-k` given the index of `k`.
    #[inline]
    pub fn mirror(&self, idx: usize) -> usize {
        self.len() - 1 - idx
    }

    pub fn index_of(&self, k: WaveVector) -> Option<usize> {
        let kmax = self.inner.kmax;
        let side = (2 * kmax + 1) as usize;
        let c = k.0;
        let in_range = |v: i32| v.abs() <= kmax;
        match self.inner.dims {
            1 => {
                if c[1] != 0 || c[2] != 0 || !in_range(c[0]) {
                    return None;
                }
                Some((c[0] + kmax) as usize)
            }
            _ => {
                if !c.iter().all(|&v| in_range(v)) {
                    return None;
                }
                let [a, b, d] = c.map(|v| (v + kmax) as usize);
                Some((a * side + b) * side + d)
            }
        }
    }

    /// `|k|^2` for each retained wavevector.
    pub fn norm_sq(&self) -> &[f64] {
        &self.inner.norm_sq
    }

    /// `|k|` for each retained wavevector.
    pub fn norms(&self) -> &[f64] {
        &self.inner.norm
    }

    /// `sum |k_i|` for each retained wavevector.
    pub fn l1_norms(&self) -> &[u32] {
        &self.inner.l1
    }

    pub fn max_l1(&self) -> u32 {
        self.inner.kmax as u32 * self.inner.dims as u32
    }

    /// Real samples per component on the physical grid, `n^dims`.
    pub fn samples_per_component(&self) -> usize {
        self.inner.n.pow(self.inner.dims as u32)
    }

    pub fn padded_n(&self) -> usize {
        self.inner.padded_n
    }

    pub fn padded_len(&self) -> usize {
        self.inner.padded_n.pow(self.inner.dims as u32)
    }

    /// Flat FFT-order positions of the retained modes on the `n^dims` grid.
    pub(crate) fn physical_positions(&self) -> &[usize] {
        &self.inner.physical_pos
    }

    /// Flat FFT-order positions of the retained modes on the padded grid.
    pub(crate) fn padded_positions(&self) -> &[usize] {
        &self.inner.padded_pos
    }
}

/// Builds the truncated grid; rejects odd or too-small `n`.
pub fn make_grid(dims: usize, n: usize) -> Result<GridSpec> {
    GridSpec::new(dims, n)
}
