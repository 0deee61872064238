//! Oracle tests for SNR, SSIM, and the mean structural similarity
//! aggregates.

use approx::assert_abs_diff_eq;
use mpctv_core::image::ImageBuffer;
use mpctv_core::metrics::{
    mssim, mssim_plain, mssim_with_range, snr_centered_db, snr_db, ssim_diff, ssim_map,
    ssim_map_with_range, MetricsReport,
};
use mpctv_core::Error;

fn scrambled(width: usize, height: usize, salt: u64) -> ImageBuffer {
    ImageBuffer::from_fn(width, height, |x, y| {
        let mut z = (y * width + x) as u64 ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        (z >> 11) as f64 / (1u64 << 53) as f64 * 255.0
    })
}

#[test]
fn snr_identical_images_error() {
    let u = scrambled(8, 8, 3);
    assert!(matches!(snr_db(&u, &u), Err(Error::IdenticalImages)));
    assert!(matches!(
        snr_centered_db(&u, &u),
        Err(Error::IdenticalImages)
    ));
}

#[test]
fn snr_centered_two_by_two_oracle() {
    // Hand oracle, computed term by term: the numerator is the variance
    // of the denoised (first) image about its own mean.
    let denoised = ImageBuffer::from_samples(2, 2, vec![1.0, 3.0, 1.0, 3.0]).unwrap();
    let clean = ImageBuffer::from_samples(2, 2, vec![1.0, 3.0, 1.0, 2.0]).unwrap();
    let mean = (1.0 + 3.0 + 1.0 + 3.0) / 4.0; // 2.0
    let num: f64 = [1.0, 3.0, 1.0, 3.0]
        .iter()
        .map(|v| (v - mean) * (v - mean))
        .sum(); // 4.0
    let den: f64 = [0.0, 0.0, 0.0, 1.0].iter().map(|v| v * v).sum(); // 1.0
    assert_eq!((num, den), (4.0, 1.0));
    let oracle = 10.0 * (num / den).log10();
    assert_abs_diff_eq!(oracle, 6.0206, epsilon = 1e-4);
    assert_abs_diff_eq!(
        snr_centered_db(&denoised, &clean).unwrap(),
        oracle,
        epsilon = 1e-12
    );
}

#[test]
fn snr_centered_constant_offset_reduction() {
    // u = clean + c with non-constant clean: the numerator equals the
    // clean image's variance sum and the denominator is M*c*c.
    let clean = scrambled(16, 16, 44);
    let c = 3.5;
    let u = clean.map(|v| v + c);
    let mu = clean.mean();
    let num: f64 = clean.as_slice().iter().map(|v| (v - mu) * (v - mu)).sum();
    let oracle = 10.0 * (num / (clean.len() as f64 * c * c)).log10();
    assert_abs_diff_eq!(snr_centered_db(&u, &clean).unwrap(), oracle, epsilon = 1e-9);
}

#[test]
fn snr_centered_is_invariant_to_constant_shift_of_both() {
    let clean = scrambled(16, 16, 5);
    let noisy = scrambled(16, 16, 6);
    let base = snr_centered_db(&noisy, &clean).unwrap();
    let shift = 40.0;
    let clean_s = clean.map(|v| v + shift);
    let noisy_s = noisy.map(|v| v + shift);
    let shifted = snr_centered_db(&noisy_s, &clean_s).unwrap();
    assert_abs_diff_eq!(base, shifted, epsilon = 1e-9);
}

#[test]
fn snr_uncentered_oracle_and_shift_sensitivity() {
    let clean = ImageBuffer::from_samples(2, 2, vec![1.0, 3.0, 1.0, 3.0]).unwrap();
    let test = ImageBuffer::from_samples(2, 2, vec![1.0, 3.0, 1.0, 2.0]).unwrap();
    // Uncentered oracle: signal power is the raw sum of squares of the
    // test image.
    let num: f64 = [1.0, 3.0, 1.0, 2.0].iter().map(|v| v * v).sum(); // 15
    let oracle = 10.0 * (num / 1.0).log10();
    assert_abs_diff_eq!(snr_db(&test, &clean).unwrap(), oracle, epsilon = 1e-12);

    // Unlike the centered form, the raw form moves under a joint shift.
    let clean_s = clean.map(|v| v + 40.0);
    let test_s = test.map(|v| v + 40.0);
    let shifted = snr_db(&test_s, &clean_s).unwrap();
    assert!((shifted - oracle).abs() > 1.0);
}

#[test]
fn snr_scales_with_error_energy() {
    // Halving the perturbation raises the SNR by close to 20 log10(2) dB
    // (not exactly: the numerator also tracks the denoised image).
    let clean = scrambled(32, 32, 9);
    let delta = scrambled(32, 32, 10).map(|v| (v - 127.0) / 50.0);
    let add = |scale: f64| {
        ImageBuffer::from_fn(32, 32, |x, y| clean.get(x, y) + scale * delta.get(x, y))
    };
    let sa = snr_centered_db(&add(1.0), &clean).unwrap();
    let sb = snr_centered_db(&add(0.5), &clean).unwrap();
    assert!((sb - sa - 20.0 * 2.0_f64.log10()).abs() < 0.2);
}

#[test]
fn ssim_self_similarity_is_exactly_one() {
    let u = scrambled(24, 16, 77);
    let map = ssim_map(&u, &u).unwrap();
    assert!(map.as_slice().iter().all(|&v| v == 1.0));
    assert_eq!(mssim(&u, &u).unwrap(), 1.0);
    assert_eq!(mssim_plain(&u, &u, 255.0).unwrap(), 1.0);
}

#[test]
fn ssim_symmetry_is_bitwise() {
    let a = scrambled(20, 20, 1);
    let b = scrambled(20, 20, 2);
    let ab = ssim_map(&a, &b).unwrap();
    let ba = ssim_map(&b, &a).unwrap();
    assert_eq!(ab, ba);
}

#[test]
fn ssim_constant_images_oracle() {
    // Two constant images: variances and covariance vanish, so SSIM
    // reduces to the luminance term alone.
    let a = ImageBuffer::constant(16, 16, 0.0);
    let b = ImageBuffer::constant(16, 16, 255.0);
    let c1 = (0.01_f64 * 255.0) * (0.01_f64 * 255.0);
    let oracle = (2.0 * 0.0 * 255.0 + c1) / (0.0 + 255.0 * 255.0 + c1);
    assert_abs_diff_eq!(oracle, 0.0001, epsilon = 1e-5);
    let map = ssim_map(&a, &b).unwrap();
    for &v in map.as_slice() {
        assert_abs_diff_eq!(v, oracle, epsilon = 1e-15);
    }
}

#[test]
fn ssim_is_bounded_and_dimensioned() {
    let a = scrambled(37, 21, 4);
    let b = a.map(|v| 255.0 - v);
    let map = ssim_map(&a, &b).unwrap();
    assert_eq!(map.dims(), a.dims());
    assert!(map.as_slice().iter().all(|&v| (-1.0..=1.0).contains(&v)));
}

#[test]
fn ssim_window_oracle_on_flat_right_padding() {
    // On an image whose right and bottom extensions replicate into the
    // window, a direct two-pass oracle over the clamped 8x8 window must
    // match the map value at an interior-edge pixel.
    let a = scrambled(12, 12, 41);
    let b = scrambled(12, 12, 42);
    let map = ssim_map(&a, &b).unwrap();
    let l = 255.0;
    let (c1, c2) = ((0.01 * l) * (0.01 * l), (0.03 * l) * (0.03 * l));
    let c3 = c2 / 2.0;
    for &(px, py) in &[(0usize, 0usize), (7, 3), (11, 11), (9, 5)] {
        let mut wa = Vec::with_capacity(64);
        let mut wb = Vec::with_capacity(64);
        for dy in 0..8 {
            for dx in 0..8 {
                let x = (px + dx).min(11);
                let y = (py + dy).min(11);
                wa.push(a.get(x, y));
                wb.push(b.get(x, y));
            }
        }
        let mean = |w: &[f64]| w.iter().sum::<f64>() / 64.0;
        let (ma, mb) = (mean(&wa), mean(&wb));
        let var = |w: &[f64], m: f64| w.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / 64.0;
        let (va, vb) = (var(&wa, ma), var(&wb, mb));
        let cov = wa
            .iter()
            .zip(&wb)
            .map(|(x, y)| (x - ma) * (y - mb))
            .sum::<f64>()
            / 64.0;
        let sab = (va * vb).sqrt();
        let oracle = ((2.0 * ma * mb + c1) / (ma * ma + mb * mb + c1))
            * ((2.0 * sab + c2) / (va + vb + c2))
            * ((cov + c3) / (sab + c3));
        assert_abs_diff_eq!(map.get(px, py), oracle.clamp(-1.0, 1.0), epsilon = 1e-12);
    }
}

#[test]
fn ssim_approaches_one_as_images_converge() {
    let a = scrambled(16, 16, 8);
    let mut prev = f64::NEG_INFINITY;
    for &amp in &[8.0, 2.0, 0.5, 0.125] {
        let b = a.map(|v| v + amp);
        let m = mssim_plain(&a, &b, 255.0).unwrap();
        assert!(m > prev, "MSSIM should rise as perturbation shrinks");
        prev = m;
    }
    assert!(prev > 0.999);
}

#[test]
fn mssim_squares_window_scores() {
    let a = scrambled(16, 16, 12);
    let b = scrambled(16, 16, 13);
    let map = ssim_map(&a, &b).unwrap();
    let sq = map.as_slice().iter().map(|v| v * v).sum::<f64>() / map.len() as f64;
    let plain = map.as_slice().iter().sum::<f64>() / map.len() as f64;
    assert_abs_diff_eq!(mssim(&a, &b).unwrap(), sq, epsilon = 1e-15);
    assert_abs_diff_eq!(mssim_plain(&a, &b, 255.0).unwrap(), plain, epsilon = 1e-15);
    // Squaring keeps the aggregate nonnegative even when individual
    // windows score negative (the plain mean can dip below it then).
    assert!(mssim(&a, &b).unwrap() >= 0.0);
}

#[test]
fn metrics_are_invariant_under_joint_rescale_with_range() {
    // Metrics computed on [0,1] data with unit dynamic range must agree
    // with the same data expressed on [0,255] with the 8-bit range.
    let a = scrambled(24, 24, 21);
    let b = scrambled(24, 24, 22);
    let a1 = a.map(|v| v / 255.0);
    let b1 = b.map(|v| v / 255.0);
    let big = ssim_map_with_range(&a, &b, 255.0).unwrap();
    let small = ssim_map_with_range(&a1, &b1, 1.0).unwrap();
    for (x, y) in big.as_slice().iter().zip(small.as_slice()) {
        assert_abs_diff_eq!(x, y, epsilon = 1e-12);
    }
    assert_abs_diff_eq!(
        mssim_with_range(&a, &b, 255.0).unwrap(),
        mssim_with_range(&a1, &b1, 1.0).unwrap(),
        epsilon = 1e-12
    );
    assert_abs_diff_eq!(
        snr_db(&a, &b).unwrap(),
        snr_db(&a1, &b1).unwrap(),
        epsilon = 1e-9
    );
}

#[test]
fn ssim_diff_is_pointwise_map_subtraction() {
    let a = scrambled(16, 16, 31);
    let b = scrambled(16, 16, 32);
    let map = ssim_map(&a, &b).unwrap();
    let d = ssim_diff(&map, &map).unwrap();
    assert!(d.as_slice().iter().all(|&v| v == 0.0));

    let ones = ImageBuffer::constant(16, 16, 1.0);
    let halves = ImageBuffer::constant(16, 16, 0.5);
    let d = ssim_diff(&ones, &halves).unwrap();
    assert!(d.as_slice().iter().all(|&v| v == 0.5));

    // A locally disturbed image scores lower there, so the difference of
    // (reference vs pristine) minus (reference vs disturbed) is positive
    // near the disturbance.
    let mut c = b.clone();
    for y in 4..8 {
        for x in 4..8 {
            c.set(x, y, 255.0 - c.get(x, y));
        }
    }
    let map_bad = ssim_map(&c, &b).unwrap();
    let map_good = ssim_map(&b, &b).unwrap();
    let d = ssim_diff(&map_good, &map_bad).unwrap();
    assert!(d.get(5, 5) > d.get(14, 14));
    assert!(d.get(5, 5) > 0.0);
}

#[test]
fn metrics_report_bundles_consistent_values() {
    let clean = scrambled(32, 32, 50);
    let noisy = clean.map(|v| (v + 12.0).min(255.0));
    let report = MetricsReport::compute(&noisy, &clean, 255.0).unwrap();
    assert_abs_diff_eq!(
        report.snr_db,
        snr_db(&noisy, &clean).unwrap(),
        epsilon = 1e-15
    );
    assert_abs_diff_eq!(
        report.mssim,
        mssim(&noisy, &clean).unwrap(),
        epsilon = 1e-15
    );
    assert_eq!(report.ssim_map.dims(), clean.dims());
}

#[test]
fn dimension_mismatch_is_rejected() {
    let a = ImageBuffer::zeros(8, 8);
    let b = ImageBuffer::zeros(8, 9);
    assert!(matches!(snr_db(&a, &b), Err(Error::DimensionMismatch(..))));
    assert!(matches!(ssim_map(&a, &b), Err(Error::DimensionMismatch(..))));
    assert!(matches!(mssim(&a, &b), Err(Error::DimensionMismatch(..))));
}
