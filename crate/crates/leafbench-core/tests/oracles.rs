//! Brute-force definitional oracles for every filter and metric.
//!
//! Each oracle re-derives the operation from its definition with plain
//! nested loops, independent of the library's implementation paths.

use leafbench_core::filters::{
    bilateral_filter, convolve2d, gaussian_taps, mean_filter, median_filter, nlm_filter, Kernel,
};
use leafbench_core::metrics::{evaluate, mse, nmi, nrmse, ssim, MetricConfig};
use leafbench_core::rng::NoiseStream;
use leafbench_core::{ColorSpace, Plane, Raster};

fn reflect101(i: isize, n: usize) -> usize {
    if n == 1 {
        return 0;
    }
    let period = 2 * (n as isize - 1);
    let mut m = i % period;
    if m < 0 {
        m += period;
    }
    if m >= n as isize {
        (period - m) as usize
    } else {
        m as usize
    }
}

fn random_bytes(stream: &mut NoiseStream, len: usize) -> Vec<u8> {
    (0..len).map(|_| (stream.next_u64() >> 56) as u8).collect()
}

fn random_gray(stream: &mut NoiseStream, w: usize, h: usize) -> Raster {
    Raster::new(w, h, 1, ColorSpace::Gray, random_bytes(stream, w * h)).unwrap()
}

fn random_rgb(stream: &mut NoiseStream, w: usize, h: usize) -> Raster {
    Raster::new(w, h, 3, ColorSpace::Srgb, random_bytes(stream, w * h * 3)).unwrap()
}

fn quantize(v: f64) -> u8 {
    let r = v.round();
    r.clamp(0.0, 255.0) as u8
}

// ---------------------------------------------------------------- convolve

#[test]
fn convolve2d_matches_quadruple_loop() {
    let mut stream = NoiseStream::derive(0xC0FFEE, 0);
    for trial in 0..50 {
        let plane = Plane::new(
            8,
            8,
            (0..64).map(|_| stream.next_unit() * 255.0).collect(),
        )
        .unwrap();
        let kernel_values: Vec<f64> = (0..9).map(|_| stream.next_unit() * 2.0 - 1.0).collect();
        let kernel = Kernel::new(3, 3, kernel_values.clone()).unwrap();
        let out = convolve2d(&plane, &kernel).unwrap();
        // O(x, y) = sum_{u,v} K(u, v) * I(x - u, y - v), kernel center origin
        for y in 0..8isize {
            for x in 0..8isize {
                let mut acc = 0.0;
                for j in 0..3isize {
                    for i in 0..3isize {
                        let (u, v) = (i - 1, j - 1);
                        let sx = reflect101(x - u, 8);
                        let sy = reflect101(y - v, 8);
                        acc += kernel_values[(j * 3 + i) as usize] * plane.get(sx, sy);
                    }
                }
                let got = out.get(x as usize, y as usize);
                assert!(
                    (acc - got).abs() < 1e-10,
                    "trial {trial} at ({x},{y}): {acc} vs {got}"
                );
            }
        }
    }
}

#[test]
fn convolve2d_is_linear() {
    let mut stream = NoiseStream::derive(0xAB, 0);
    let a = Plane::new(8, 8, (0..64).map(|_| stream.next_unit() * 255.0).collect()).unwrap();
    let b = Plane::new(8, 8, (0..64).map(|_| stream.next_unit() * 255.0).collect()).unwrap();
    let kernel = Kernel::gaussian(3, Some(0.9)).unwrap();
    let (alpha, beta) = (0.7, -1.3);
    let combined = Plane::new(
        8,
        8,
        a.samples()
            .iter()
            .zip(b.samples())
            .map(|(&x, &y)| alpha * x + beta * y)
            .collect(),
    )
    .unwrap();
    let lhs = convolve2d(&combined, &kernel).unwrap();
    let ca = convolve2d(&a, &kernel).unwrap();
    let cb = convolve2d(&b, &kernel).unwrap();
    for ((l, x), y) in lhs.samples().iter().zip(ca.samples()).zip(cb.samples()) {
        assert!((l - (alpha * x + beta * y)).abs() < 1e-9);
    }
}

// ----------------------------------------------------------------- filters

#[test]
fn mean_filter_matches_sliding_window_oracle_exactly() {
    let mut stream = NoiseStream::derive(1, 0);
    for trial in 0..50 {
        let img = random_gray(&mut stream, 16, 16);
        let out = mean_filter(&img, 5).unwrap();
        for y in 0..16isize {
            for x in 0..16isize {
                let mut sum = 0u32;
                for j in -2..=2 {
                    for i in -2..=2 {
                        sum += img.sample(reflect101(x + i, 16), reflect101(y + j, 16), 0) as u32;
                    }
                }
                let expected = quantize(sum as f64 / 25.0);
                assert_eq!(
                    out.sample(x as usize, y as usize, 0),
                    expected,
                    "trial {trial} at ({x},{y})"
                );
            }
        }
    }
}

#[test]
fn median_filter_matches_sort_oracle_exactly() {
    let mut stream = NoiseStream::derive(2, 0);
    for trial in 0..50 {
        let img = random_gray(&mut stream, 16, 16);
        let out = median_filter(&img, 5).unwrap();
        for y in 0..16isize {
            for x in 0..16isize {
                let mut window = Vec::with_capacity(25);
                for j in -2..=2 {
                    for i in -2..=2 {
                        window.push(img.sample(reflect101(x + i, 16), reflect101(y + j, 16), 0));
                    }
                }
                window.sort_unstable();
                assert_eq!(
                    out.sample(x as usize, y as usize, 0),
                    window[12],
                    "trial {trial} at ({x},{y})"
                );
            }
        }
    }
}

fn bilateral_oracle(img: &Raster, d: usize, sigma_color: f64, sigma_space: f64) -> Raster {
    let (w, h, ch) = (img.width(), img.height(), img.channels());
    let r = (d / 2) as isize;
    let mut out = vec![0u8; w * h * ch];
    for y in 0..h as isize {
        for x in 0..w as isize {
            let mut acc = vec![0.0f64; ch];
            let mut weight_sum = 0.0;
            for dy in -r..=r {
                for dx in -r..=r {
                    let (nx, ny) = (reflect101(x + dx, w), reflect101(y + dy, h));
                    let mut delta = 0.0;
                    for c in 0..ch {
                        delta += (img.sample(nx, ny, c) as f64
                            - img.sample(x as usize, y as usize, c) as f64)
                            .abs();
                    }
                    let spatial = (-((dx * dx + dy * dy) as f64)
                        / (2.0 * sigma_space * sigma_space))
                        .exp();
                    let range = (-(delta * delta) / (2.0 * sigma_color * sigma_color)).exp();
                    let wgt = spatial * range;
                    weight_sum += wgt;
                    for c in 0..ch {
                        acc[c] += wgt * img.sample(nx, ny, c) as f64;
                    }
                }
            }
            for c in 0..ch {
                out[(y as usize * w + x as usize) * ch + c] = quantize(acc[c] / weight_sum);
            }
        }
    }
    Raster::new(w, h, ch, img.space(), out).unwrap()
}

#[test]
fn bilateral_matches_double_loop_oracle() {
    let mut stream = NoiseStream::derive(3, 0);
    for trial in 0..50 {
        let img = random_rgb(&mut stream, 12, 12);
        let got = bilateral_filter(&img, 9, 75.0, 75.0).unwrap();
        let want = bilateral_oracle(&img, 9, 75.0, 75.0);
        for (a, b) in got.samples().iter().zip(want.samples()) {
            assert!(
                (*a as i16 - *b as i16).abs() <= 1,
                "trial {trial}: {a} vs {b}"
            );
        }
    }
}

#[test]
fn bilateral_converges_to_spatial_average_for_huge_sigma_color() {
    let mut stream = NoiseStream::derive(4, 0);
    for _ in 0..10 {
        let img = random_rgb(&mut stream, 12, 12);
        let got = bilateral_filter(&img, 9, 1e6, 75.0).unwrap();
        // pure spatial-Gaussian-weighted average oracle
        let (w, h, ch) = (12usize, 12usize, 3usize);
        for y in 0..h as isize {
            for x in 0..w as isize {
                for c in 0..ch {
                    let mut acc = 0.0;
                    let mut weight_sum = 0.0;
                    for dy in -4isize..=4 {
                        for dx in -4isize..=4 {
                            let spatial =
                                (-((dx * dx + dy * dy) as f64) / (2.0 * 75.0 * 75.0)).exp();
                            acc += spatial
                                * img.sample(reflect101(x + dx, w), reflect101(y + dy, h), c)
                                    as f64;
                            weight_sum += spatial;
                        }
                    }
                    let expected = quantize(acc / weight_sum);
                    let actual = got.sample(x as usize, y as usize, c);
                    assert!((actual as i16 - expected as i16).abs() <= 1);
                }
            }
        }
    }
}

fn nlm_oracle_gray(img: &Raster, h: f64, template: isize, search: isize) -> Raster {
    let (w, ht) = (img.width(), img.height());
    let tr = template / 2;
    let sr = search / 2;
    let mut out = vec![0u8; w * ht];
    let pixel = |x: isize, y: isize| img.sample(reflect101(x, w), reflect101(y, ht), 0) as f64;
    for y in 0..ht as isize {
        for x in 0..w as isize {
            let mut num = 0.0;
            let mut den = 0.0;
            for dy in -sr..=sr {
                for dx in -sr..=sr {
                    let mut ssd = 0.0;
                    for v in -tr..=tr {
                        for u in -tr..=tr {
                            let d = pixel(x + u, y + v) - pixel(x + dx + u, y + dy + v);
                            ssd += d * d;
                        }
                    }
                    let d2 = ssd / (template * template) as f64;
                    let wgt = (-d2 / (h * h)).exp();
                    num += wgt * pixel(x + dx, y + dy);
                    den += wgt;
                }
            }
            out[y as usize * w + x as usize] = quantize(num / den);
        }
    }
    Raster::new(w, ht, 1, ColorSpace::Gray, out).unwrap()
}

#[test]
fn nlm_matches_triple_loop_oracle() {
    let mut stream = NoiseStream::derive(5, 0);
    for trial in 0..50 {
        let img = random_gray(&mut stream, 10, 10);
        let got = nlm_filter(&img, 10.0, 10.0, 3, 5).unwrap();
        let want = nlm_oracle_gray(&img, 10.0, 3, 5);
        for (a, b) in got.samples().iter().zip(want.samples()) {
            assert!(
                (*a as i16 - *b as i16).abs() <= 1,
                "trial {trial}: {a} vs {b}"
            );
        }
    }
}

#[test]
fn gaussian_taps_match_formula() {
    // k = 5, auto: sigma = 0.3*((5-1)*0.5 - 1) + 0.8 = 1.1
    let taps = gaussian_taps(5, None).unwrap();
    let sigma = 1.1f64;
    let raw: Vec<f64> = (-2..=2)
        .map(|i| (-((i * i) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let sum: f64 = raw.iter().sum();
    for (t, r) in taps.iter().zip(&raw) {
        assert!((t - r / sum).abs() < 1e-12);
    }
}

// ----------------------------------------------------------------- metrics

#[test]
fn ssim_matches_per_window_oracle() {
    let cfg = MetricConfig::default();
    let mut stream = NoiseStream::derive(6, 0);
    for _ in 0..20 {
        let a = random_gray(&mut stream, 16, 16);
        let b = random_gray(&mut stream, 16, 16);
        let got = ssim(&a, &b, &cfg).unwrap();

        let win = 7usize;
        let n = (win * win) as f64;
        let c1 = (0.01f64 * 255.0).powi(2);
        let c2 = (0.03f64 * 255.0).powi(2);
        let mut acc = 0.0;
        let mut count = 0.0;
        for wy in 0..=(16 - win) {
            for wx in 0..=(16 - win) {
                let mut xs = Vec::new();
                let mut ys = Vec::new();
                for j in 0..win {
                    for i in 0..win {
                        xs.push(a.sample(wx + i, wy + j, 0) as f64);
                        ys.push(b.sample(wx + i, wy + j, 0) as f64);
                    }
                }
                let ux = xs.iter().sum::<f64>() / n;
                let uy = ys.iter().sum::<f64>() / n;
                let vx = xs.iter().map(|v| (v - ux) * (v - ux)).sum::<f64>() / (n - 1.0);
                let vy = ys.iter().map(|v| (v - uy) * (v - uy)).sum::<f64>() / (n - 1.0);
                let cov = xs
                    .iter()
                    .zip(&ys)
                    .map(|(x, y)| (x - ux) * (y - uy))
                    .sum::<f64>()
                    / (n - 1.0);
                acc += ((2.0 * ux * uy + c1) * (2.0 * cov + c2))
                    / ((ux * ux + uy * uy + c1) * (vx + vy + c2));
                count += 1.0;
            }
        }
        let want = acc / count;
        assert!((got - want).abs() < 1e-7, "{got} vs {want}");
    }
}

#[test]
fn nmi_matches_histogram_oracle() {
    let cfg = MetricConfig::default();
    let mut stream = NoiseStream::derive(7, 0);
    for _ in 0..20 {
        let a = random_gray(&mut stream, 24, 24);
        let b = random_gray(&mut stream, 24, 24);
        let got = nmi(&a, &b, &cfg).unwrap();

        let bins = 100usize;
        let mut joint = vec![0f64; bins * bins];
        for (x, y) in a.samples().iter().zip(b.samples()) {
            joint[(*x as usize * bins / 256) * bins + (*y as usize * bins / 256)] += 1.0;
        }
        let total: f64 = joint.iter().sum();
        let entropy = |ps: &[f64]| -> f64 {
            ps.iter()
                .filter(|&&p| p > 0.0)
                .map(|&p| {
                    let q = p / total;
                    -q * q.ln()
                })
                .sum()
        };
        let h_joint = entropy(&joint);
        let mut rows = vec![0f64; bins];
        let mut cols = vec![0f64; bins];
        for i in 0..bins {
            for j in 0..bins {
                rows[i] += joint[i * bins + j];
                cols[j] += joint[i * bins + j];
            }
        }
        let want = (entropy(&rows) + entropy(&cols)) / h_joint;
        assert!((got - want).abs() < 1e-7, "{got} vs {want}");
    }
}

#[test]
fn nrmse_consistency_identity() {
    let mut stream = NoiseStream::derive(8, 0);
    for _ in 0..20 {
        let a = random_gray(&mut stream, 16, 16);
        let b = random_gray(&mut stream, 16, 16);
        let err = mse(&a, &b).unwrap();
        let norm = nrmse(&a, &b).unwrap();
        let ref_power = a
            .samples()
            .iter()
            .map(|&v| v as f64 * v as f64)
            .sum::<f64>()
            / a.samples().len() as f64;
        assert!((norm * norm * ref_power - err).abs() < 1e-9);
    }
}

#[test]
fn metric_symmetry_and_bounds() {
    let cfg = MetricConfig::default();
    let mut stream = NoiseStream::derive(9, 0);
    for _ in 0..10 {
        let a = random_gray(&mut stream, 16, 16);
        let b = random_gray(&mut stream, 16, 16);
        assert_eq!(mse(&a, &b).unwrap(), mse(&b, &a).unwrap());
        let va = evaluate(&a, &b, &cfg).unwrap();
        let vb = evaluate(&b, &a, &cfg).unwrap();
        assert_eq!(va.psnr, vb.psnr);
        assert!((va.ssim - vb.ssim).abs() < 1e-12);
        assert!((va.nmi - vb.nmi).abs() < 1e-9);
        assert!((-1.0..=1.0).contains(&va.ssim));
        assert!(va.nrmse >= 0.0);
        assert!((1.0..=2.0 + 1e-12).contains(&va.nmi));
    }
    // NRMSE is reference-normalized, hence asymmetric
    let a = Raster::filled(8, 8, ColorSpace::Gray, 100).unwrap();
    let b = Raster::filled(8, 8, ColorSpace::Gray, 200).unwrap();
    assert!(nrmse(&a, &b).unwrap() != nrmse(&b, &a).unwrap());
}
