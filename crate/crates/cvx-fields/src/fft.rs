//! Multidimensional FFT built from 1-D complex transforms, one axis at a time.

use ndarray::{ArrayD, Axis};
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::cell::RefCell;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn transform_axes(data: &mut ArrayD<Complex64>, inverse: bool) {
    for axis in 0..data.ndim() {
        let n = data.shape()[axis];
        let fft = PLANNER.with(|p| {
            let mut p = p.borrow_mut();
            if inverse {
                p.plan_fft_inverse(n)
            } else {
                p.plan_fft_forward(n)
            }
        });
        let mut lane = vec![Complex64::default(); n];
        for mut view in data.lanes_mut(Axis(axis)) {
            for (dst, src) in lane.iter_mut().zip(view.iter()) {
                *dst = *src;
            }
            fft.process(&mut lane);
            for (dst, src) in view.iter_mut().zip(lane.iter()) {
                *dst = *src;
            }
        }
    }
}

/// Forward transform of real samples; output is scaled by 1/n^d so that the
/// zero mode is the mean.
pub fn forward(values: &ArrayD<f64>) -> ArrayD<Complex64> {
    let mut data = values.mapv(|v| Complex64::new(v, 0.0));
    transform_axes(&mut data, false);
    let scale = 1.0 / values.len() as f64;
    data.mapv_inplace(|c| c * scale);
    data
}

/// Inverse transform; returns (real part, largest |imaginary part|).
pub fn inverse(spectrum: &ArrayD<Complex64>) -> (ArrayD<f64>, f64) {
    let mut data = spectrum.clone();
    transform_axes(&mut data, true);
    let mut max_im = 0.0f64;
    let re = data.mapv(|c| {
        max_im = max_im.max(c.im.abs());
        c.re
    });
    (re, max_im)
}
