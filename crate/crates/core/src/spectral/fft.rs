//! Multi-dimensional complex FFTs over `rustfft`, with pruning for
//! band-limited data.

use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

fn planner() -> &'static Mutex<FftPlanner<f64>> {
    static PLANNER: OnceLock<Mutex<FftPlanner<f64>>> = OnceLock::new();
    PLANNER.get_or_init(|| Mutex::new(FftPlanner::new()))
}

pub(crate) fn plan(n: usize, direction: FftDirection) -> Arc<dyn Fft<f64>> {
    // the planner caches plans internally
    let mut p = planner().lock().unwrap_or_else(|e| e.into_inner());
    p.plan_fft(n, direction)
}

/// In-place unnormalized FFT of an `n^dims` row-major array.
///
/// With `band = Some(kmax)`, the spectral side is known (inverse) or only
/// needed (forward) on `|k_i| <= kmax`; lines that are identically zero or
/// whose output is discarded are skipped.
pub(crate) fn fft_nd(
    data: &mut [Complex64],
    n: usize,
    dims: usize,
    direction: FftDirection,
    band: Option<usize>,
) {
    let fft = plan(n, direction);
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    if dims == 1 {
        fft.process_with_scratch(data, &mut scratch);
        return;
    }
    debug_assert_eq!(data.len(), n * n * n);
    let in_band = |i: usize| match band {
        Some(k) => i <= k || i >= n - k,
        None => true,
    };
    let mut buf = vec![Complex64::new(0.0, 0.0); n * n];

    let last_axis = |data: &mut [Complex64], scratch: &mut [Complex64]| {
        for i0 in (0..n).filter(|&i| in_band(i)) {
            for i1 in (0..n).filter(|&i| in_band(i)) {
                let start = (i0 * n + i1) * n;
                fft.process_with_scratch(&mut data[start..start + n], scratch);
            }
        }
    };
    let middle_axis = |data: &mut [Complex64], buf: &mut [Complex64], scratch: &mut [Complex64]| {
        for i0 in (0..n).filter(|&i| in_band(i)) {
            let plane = &mut data[i0 * n * n..(i0 + 1) * n * n];
            for j in 0..n {
                for x2 in 0..n {
                    buf[x2 * n + j] = plane[j * n + x2];
                }
            }
            fft.process_with_scratch(buf, scratch);
            for j in 0..n {
                for x2 in 0..n {
                    plane[j * n + x2] = buf[x2 * n + j];
                }
            }
        }
    };
    let first_axis = |data: &mut [Complex64], buf: &mut [Complex64], scratch: &mut [Complex64]| {
        for i1 in 0..n {
            for i0 in 0..n {
                let row = (i0 * n + i1) * n;
                for x2 in 0..n {
                    buf[x2 * n + i0] = data[row + x2];
                }
            }
            fft.process_with_scratch(buf, scratch);
            for i0 in 0..n {
                let row = (i0 * n + i1) * n;
                for x2 in 0..n {
                    data[row + x2] = buf[x2 * n + i0];
                }
            }
        }
    };

    match direction {
        FftDirection::Inverse => {
            last_axis(data, &mut scratch);
            middle_axis(data, &mut buf, &mut scratch);
            first_axis(data, &mut buf, &mut scratch);
        }
        FftDirection::Forward => {
            first_axis(data, &mut buf, &mut scratch);
            middle_axis(data, &mut buf, &mut scratch);
            last_axis(data, &mut scratch);
        }
    }
}
