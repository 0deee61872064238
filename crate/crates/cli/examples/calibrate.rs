//! Tuning probe for the built-in synthetic test image: prints the global
//! statistics and sweep peaks the feature amplitudes in `testimage.rs`
//! are calibrated against. Pass `mpc` to include the (slower) PC-modulated
//! sweeps, `speckle`/`sap` for the other noise families.

use mpctv_cli::commands::{solve, to_unit};
use mpctv_cli::testimage::phantom;
use mpctv_core::image::ImageBuffer;
use mpctv_core::metrics::{mssim_plain, snr_db};
use mpctv_core::noise::{apply, NoiseSpec};
use mpctv_core::solver::{Method, SolveTrace, SolverConfig, TraceReference};

fn sweep(clean: &ImageBuffer, noised: &ImageBuffer, cfg: &SolverConfig) -> SolveTrace {
    let u0 = to_unit(noised);
    let clean_unit = to_unit(clean);
    let reference = TraceReference {
        clean: &clean_unit,
        dynamic_range: 1.0,
    };
    let (_, trace) = solve(&u0, cfg, Some(reference)).unwrap();
    trace
}

fn report(label: &str, trace: &SolveTrace) -> (usize, f64) {
    let (mut best_n, mut best) = (0usize, f64::NEG_INFINITY);
    for row in &trace.rows {
        if let Some(s) = row.snr_db {
            if s > best {
                best = s;
                best_n = row.iteration;
            }
        }
    }
    let at = |n: usize| {
        trace
            .rows
            .iter()
            .find(|r| r.iteration == n)
            .and_then(|r| r.snr_db)
            .unwrap_or(f64::NAN)
    };
    println!(
        "{label}: peak {best:.4} dB @ N={best_n}; snr[16]={:.4} snr[19]={:.4} drop10={:.4}",
        at(16),
        at(19),
        best - at(best_n + 10)
    );
    (best_n, best)
}

fn at_n(clean: &ImageBuffer, noised: &ImageBuffer, cfg: &SolverConfig, n: usize) -> (f64, f64) {
    let u0 = to_unit(noised);
    let clean_unit = to_unit(clean);
    let cfg = SolverConfig {
        iterations: n,
        trace: false,
        ..cfg.clone()
    };
    let (out, _) = solve(&u0, &cfg, None).unwrap();
    (
        snr_db(&out, &clean_unit).unwrap(),
        mssim_plain(&out, &clean_unit, 1.0).unwrap(),
    )
}

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let clean = phantom(512);
    println!(
        "clean: mean={:.2} E[u^2]={:.0} std={:.2}",
        clean.mean(),
        clean.mean_sq(),
        (clean.mean_sq() - clean.mean().powi(2)).sqrt()
    );

    let noised = apply(&clean, &NoiseSpec::gaussian(300.0, 42)).unwrap();
    println!(
        "gaussian300: snr0={:.4} mssim_plain0={:.4}",
        snr_db(&noised, &clean).unwrap(),
        mssim_plain(&noised, &clean, 255.0).unwrap()
    );

    let base = SolverConfig {
        iterations: 35,
        trace: true,
        ..SolverConfig::default()
    };
    if args.iter().any(|a| a == "stats0") {
        // Preamble above already printed clean stats and initial metrics.
        // Break the initial gaussian MSSIM down by content region.
        let clean_unit = to_unit(&clean);
        let noisy_unit = to_unit(&noised);
        let map = mpctv_core::metrics::ssim_map_with_range(&noisy_unit, &clean_unit, 1.0).unwrap();
        let (w, h) = clean_unit.dims();
        let s = w as f64;
        let region_of = |x: usize, y: usize| -> usize {
            let uu = x as f64 / s;
            let vv = y as f64 / s;
            if uu < 0.14 {
                return 0;
            }
            if (uu - 0.5 * vv - 0.12).abs() < 0.035 && vv > 0.52 {
                return 1;
            }
            let dr = ((uu - 0.76).powi(2) + (vv - 0.74).powi(2)).sqrt();
            if (dr - 0.13).abs() < 0.025 {
                return 2;
            }
            if dr < 0.08 {
                return 3;
            }
            let on_rect_edge = ((0.66..0.94).contains(&uu)
                && ((vv - 0.08).abs() < 0.012 || (vv - 0.40).abs() < 0.012))
                || ((0.08..0.40).contains(&vv)
                    && ((uu - 0.66).abs() < 0.012 || (uu - 0.94).abs() < 0.012));
            if on_rect_edge {
                return 4;
            }
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for dy in -2isize..=2 {
                for dx in -2isize..=2 {
                    let sv = clean_unit.get_replicate(x as isize + dx, y as isize + dy);
                    lo = lo.min(sv);
                    hi = hi.max(sv);
                }
            }
            if (hi - lo) * 255.0 < 14.0 {
                5
            } else {
                6
            }
        };
        let names = [
            "band", "bar", "discrim", "discint", "rectedge", "restflat", "reststrc",
        ];
        let mut sums = [0.0f64; 7];
        let mut cnt = [0usize; 7];
        for y in 0..h {
            for x in 0..w {
                let r = region_of(x, y);
                sums[r] += map.get(x, y);
                cnt[r] += 1;
            }
        }
        println!("initial gaussian ssim by region:");
        for r in 0..7 {
            println!(
                "  {:>8}: mean {:.3} share {:+.4} (n={})",
                names[r],
                sums[r] / cnt[r].max(1) as f64,
                sums[r] / (w * h) as f64,
                cnt[r]
            );
        }
        return;
    }

    if args.iter().any(|a| a == "qgap") {
        // Fast speckle-gap probe for single-factor image experiments.
        // Reports the acceptance view: best values over iterations 1..=35.
        let sp = apply(&clean, &NoiseSpec::speckle(500.0, 42)).unwrap();
        let cfg = SolverConfig {
            eps0: 0.015,
            dt: 0.003,
            iterations: 55,
            ..base.clone()
        };
        let window = |label: &str, t: &SolveTrace| -> (f64, f64) {
            let (mut sn, mut sv) = (0usize, f64::NEG_INFINITY);
            let (mut mn, mut mv) = (0usize, f64::NEG_INFINITY);
            for r in t.rows.iter().filter(|r| r.iteration <= 35) {
                if let Some(s) = r.snr_db {
                    if s > sv {
                        sv = s;
                        sn = r.iteration;
                    }
                }
                if let Some(m) = r.mssim {
                    if m > mv {
                        mv = m;
                        mn = r.iteration;
                    }
                }
            }
            let full = t
                .rows
                .iter()
                .filter_map(|r| r.snr_db.map(|s| (r.iteration, s)))
                .fold((0usize, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
            println!(
                "{label}: win35 snr {sv:.4}@{sn} mssim(sq) {mv:.4}@{mn}; full peak {:.4}@{}",
                full.1, full.0
            );
            (sv, mv)
        };
        let t_tv = sweep(&clean, &sp, &cfg);
        let (tsnr, tms) = window("tv s500", &t_tv);
        let cfg_mpc = SolverConfig {
            method: Method::MpcTv,
            ..cfg.clone()
        };
        let t_mpc = sweep(&clean, &sp, &cfg_mpc);
        let (msnr, mms) = window("mpc s500", &t_mpc);
        println!(
            "win35 gaps (tv - mpc, negative = mpc wins): snr {:+.4} mssim {:+.4}",
            tsnr - msnr,
            tms - mms
        );
        // Plain-mean MSSIM at the window edge for both methods.
        let (_, tp) = at_n(&clean, &sp, &cfg, 35);
        let (_, mp) = at_n(&clean, &sp, &cfg_mpc, 35);
        println!("plain mssim @35: tv {tp:.4} mpc {mp:.4} gap {:+.4}", tp - mp);
        // Fusion-only ablation: unit g isolates the median blend.
        let cfg_fo = SolverConfig {
            force_unit_g: true,
            ..cfg_mpc.clone()
        };
        let (fsnr, fms) = window("fusion-only s500", &sweep(&clean, &sp, &cfg_fo));
        let (_, fp) = at_n(&clean, &sp, &cfg_fo, 35);
        println!(
            "fusion-only vs tv: snr {:+.4} mssim(sq) {:+.4} plain@35 {:+.4}",
            tsnr - fsnr,
            tms - fms,
            tp - fp
        );
        // Same comparison at the stronger speckle power.
        let sp9 = apply(&clean, &NoiseSpec::speckle(900.0, 43)).unwrap();
        let (t9, tm9) = window("tv s900", &sweep(&clean, &sp9, &cfg));
        let (m9, mm9) = window("mpc s900", &sweep(&clean, &sp9, &cfg_mpc));
        let (_, tp9) = at_n(&clean, &sp9, &cfg, 35);
        let (_, mp9) = at_n(&clean, &sp9, &cfg_mpc, 35);
        println!(
            "s900 win35 gaps: snr {:+.4} mssim {:+.4} plain@35 {:+.4}",
            t9 - m9,
            tm9 - mm9,
            tp9 - mp9
        );
        return;
    }
    let tv_trace = sweep(&clean, &noised, &base);
    report("tv g300", &tv_trace);

    if args.iter().any(|a| a == "mpc") {
        let cfg = SolverConfig {
            method: Method::MpcTv,
            ..base.clone()
        };
        let trace = sweep(&clean, &noised, &cfg);
        report("mpc m2 g300", &trace);
    }
    if args.iter().any(|a| a == "a4") {
        // MSSIM retention 10 iterations past the best N.
        let cfg_mpc = SolverConfig {
            method: Method::MpcTv,
            ..base.clone()
        };
        let t_mpc = sweep(&clean, &noised, &cfg_mpc);
        let best_n = |t: &SolveTrace| {
            t.rows
                .iter()
                .filter_map(|r| r.snr_db.map(|s| (r.iteration, s)))
                .fold((0usize, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a })
                .0
        };
        let (tn, mn) = (best_n(&tv_trace), best_n(&t_mpc));
        let (_, tv_plain) = at_n(&clean, &noised, &base, tn + 10);
        let (_, mpc_own) = at_n(&clean, &noised, &cfg_mpc, mn + 10);
        let (_, mpc_at_tv) = at_n(&clean, &noised, &cfg_mpc, tn + 10);
        println!(
            "a4: tv plain@{}={tv_plain:.4}; mpc plain@{}={mpc_own:.4} (own best+10), \
             plain@{}={mpc_at_tv:.4} (tv best+10)",
            tn + 10,
            mn + 10,
            tn + 10
        );
        return;
    }
    if args.iter().any(|a| a == "gablate") {
        let unit_g = SolverConfig {
            method: Method::MpcTv,
            force_unit_g: true,
            ..base.clone()
        };
        report("mpc g=1 g300", &sweep(&clean, &noised, &unit_g));
        let no_fuse = SolverConfig {
            method: Method::MpcTv,
            disable_fusion: true,
            ..base.clone()
        };
        report("mpc no-fusion g300", &sweep(&clean, &noised, &no_fuse));
    }
    if args.iter().any(|a| a == "powers") {
        for m in 1..=5 {
            let cfg = SolverConfig {
                method: Method::MpcTv,
                power_m: m,
                ..base.clone()
            };
            let trace = sweep(&clean, &noised, &cfg);
            report(&format!("mpc m{m} g300"), &trace);
        }
    }
    if args.iter().any(|a| a == "speckle") {
        for variance in [500.0, 900.0] {
            let noised = apply(&clean, &NoiseSpec::speckle(variance, 42)).unwrap();
            println!(
                "speckle{variance}: snr0={:.4}",
                snr_db(&noised, &clean).unwrap()
            );
            let cfg = SolverConfig {
                eps0: 0.015,
                dt: 0.003,
                iterations: 70,
                ..base.clone()
            };
            let t_tv = sweep(&clean, &noised, &cfg);
            report(&format!("tv s{variance}"), &t_tv);
            let cfg_mpc = SolverConfig {
                method: Method::MpcTv,
                ..cfg.clone()
            };
            let t_mpc = sweep(&clean, &noised, &cfg_mpc);
            report(&format!("mpc s{variance}"), &t_mpc);
            let peak_mssim = |t: &SolveTrace| {
                t.rows
                    .iter()
                    .filter(|r| r.mssim.is_some())
                    .fold((0usize, f64::NEG_INFINITY), |(bn, bs), r| {
                        let s = r.mssim.unwrap();
                        if s > bs {
                            (r.iteration, s)
                        } else {
                            (bn, bs)
                        }
                    })
            };
            let (tv_mn, tv_ms) = peak_mssim(&t_tv);
            let (mpc_mn, mpc_ms) = peak_mssim(&t_mpc);
            println!(
                "  peak mssim(sq) tv={tv_ms:.4}@{tv_mn} mpc={mpc_ms:.4}@{mpc_mn}"
            );
            let (_, tv_plain) = at_n(&clean, &noised, &cfg, tv_mn);
            let (_, mpc_plain) = at_n(&clean, &noised, &cfg_mpc, mpc_mn);
            println!(
                "  mssim_plain at those N: tv={tv_plain:.4} mpc={mpc_plain:.4}"
            );
        }
    }
    if args.iter().any(|a| a == "gdiag") {
        // Does the adjust factor collapse selectively in bright flat zones
        // under speckle? Classify pixels by the clean image (brightness
        // terciles x flat/structured via local spread) and print mean g.
        use mpctv_core::phase_congruency::{adjust_factor, analyze, PCParams};
        let clean_unit = to_unit(&clean);
        let (w, h) = clean_unit.dims();
        let local_flat = |x: usize, y: usize| {
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for dy in -2isize..=2 {
                for dx in -2isize..=2 {
                    let s = clean_unit.get_replicate(x as isize + dx, y as isize + dy);
                    lo = lo.min(s);
                    hi = hi.max(s);
                }
            }
            (hi - lo) * 255.0 < 14.0
        };
        let class_of = |x: usize, y: usize| {
            let b = clean_unit.get(x, y) * 255.0;
            let bright = if b < 95.0 {
                0
            } else if b < 150.0 {
                1
            } else {
                2
            };
            (bright, local_flat(x, y))
        };
        let report_g = |label: &str, img: &ImageBuffer| {
            let pc = analyze(img, &PCParams::default()).unwrap();
            let g = adjust_factor(&pc.m_norm, 2).unwrap();
            let mut sums = [[0.0f64; 2]; 3];
            let mut counts = [[0usize; 2]; 3];
            for y in 0..h {
                for x in 0..w {
                    let (b, flat) = class_of(x, y);
                    let f = usize::from(flat);
                    sums[b][f] += g.get(x, y);
                    counts[b][f] += 1;
                }
            }
            println!("mean g on {label} (rows dark/mid/bright, cols structured/flat):");
            for b in 0..3 {
                let name = ["dark  ", "mid   ", "bright"][b];
                println!(
                    "  {name} structured={:.3} (n={}) flat={:.3} (n={})",
                    sums[b][0] / counts[b][0].max(1) as f64,
                    counts[b][0],
                    sums[b][1] / counts[b][1].max(1) as f64,
                    counts[b][1]
                );
            }
        };
        report_g("clean", &clean_unit);
        let sp = apply(&clean, &NoiseSpec::speckle(500.0, 42)).unwrap();
        report_g("speckle500", &to_unit(&sp));
        let ga = apply(&clean, &NoiseSpec::gaussian(300.0, 42)).unwrap();
        report_g("gaussian300", &to_unit(&ga));
    }
    if args.iter().any(|a| a == "mdiag") {
        // Where does the normalization max live, and how much headroom does
        // each content region get? Track the raw moment field over the run.
        use mpctv_core::phase_congruency::{adjust_factor, analyze, PCParams};
        use mpctv_core::solver::{fusion_median, mpc_step};
        let sp = apply(&clean, &NoiseSpec::speckle(500.0, 42)).unwrap();
        let mut u = to_unit(&sp);
        let u0 = u.clone();
        let (w, h) = u.dims();
        let s = w as f64;
        let region_of = |x: usize, y: usize| -> usize {
            let uu = x as f64 / s;
            let vv = y as f64 / s;
            if uu < 0.14 {
                return 0; // textured band
            }
            if (uu - 0.5 * vv - 0.12).abs() < 0.035 && vv > 0.52 {
                return 1; // bright bar
            }
            let dr = ((uu - 0.76).powi(2) + (vv - 0.74).powi(2)).sqrt();
            if (dr - 0.13).abs() < 0.025 {
                return 2; // disc rim
            }
            if dr < 0.08 {
                return 3; // disc interior / dot
            }
            let on_rect_edge = ((0.66..0.94).contains(&uu)
                && ((vv - 0.08).abs() < 0.012 || (vv - 0.40).abs() < 0.012))
                || ((0.08..0.40).contains(&vv)
                    && ((uu - 0.66).abs() < 0.012 || (uu - 0.94).abs() < 0.012));
            if on_rect_edge {
                return 4; // rect boundary
            }
            5 // everything else (mostly base flats)
        };
        let names = ["band", "bar", "discrim", "discint", "rectedge", "rest"];
        let dump = |label: &str, img: &ImageBuffer| {
            let pc = analyze(img, &PCParams::default()).unwrap();
            let g = adjust_factor(&pc.m_norm, 2).unwrap();
            let mut msorted: Vec<f64> = pc.m.as_slice().to_vec();
            msorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let q = |p: f64| msorted[((msorted.len() - 1) as f64 * p) as usize];
            let (mut mx, mut my, mut mv) = (0usize, 0usize, f64::NEG_INFINITY);
            for y in 0..h {
                for x in 0..w {
                    let v = pc.m.get(x, y);
                    if v > mv {
                        mv = v;
                        mx = x;
                        my = y;
                    }
                }
            }
            println!(
                "{label}: M p50={:.4} p90={:.4} p99={:.4} max={:.4} at ({mx},{my}) region={}",
                q(0.5),
                q(0.9),
                q(0.99),
                mv,
                names[region_of(mx, my)]
            );
            let mut sum_mn = [0.0f64; 6];
            let mut sum_g = [0.0f64; 6];
            let mut hi_mn = [0.0f64; 6];
            let mut cnt = [0usize; 6];
            for y in 0..h {
                for x in 0..w {
                    let r = region_of(x, y);
                    let mn = pc.m_norm.get(x, y);
                    sum_mn[r] += mn;
                    sum_g[r] += g.get(x, y);
                    if mn > hi_mn[r] {
                        hi_mn[r] = mn;
                    }
                    cnt[r] += 1;
                }
            }
            for r in 0..6 {
                println!(
                    "  {:>8}: mean Mnorm={:.3} max Mnorm={:.3} mean g={:.3} (n={})",
                    names[r],
                    sum_mn[r] / cnt[r].max(1) as f64,
                    hi_mn[r],
                    sum_g[r] / cnt[r].max(1) as f64,
                    cnt[r]
                );
            }
        };
        let cfg = SolverConfig {
            eps0: 0.015,
            dt: 0.003,
            ..base.clone()
        };
        for i in 1..=25usize {
            let pc = analyze(&u, &PCParams::default()).unwrap();
            let g = adjust_factor(&pc.m_norm, 2).unwrap();
            let stepped = mpc_step(&u, &u0, &g, &cfg).unwrap();
            u = fusion_median(&stepped, &g, cfg.dt).unwrap();
            if i == 1 || i == 10 || i == 25 {
                dump(&format!("iter {i}"), &u);
            }
        }
        return;
    }
    if args.iter().any(|a| a == "gtraj") {
        // Replicate the MPC loop by hand and watch the g distribution and
        // per-class means evolve over the speckle run.
        use mpctv_core::phase_congruency::{adjust_factor, analyze, PCParams};
        use mpctv_core::solver::{fusion_median, mpc_step};
        let clean_unit = to_unit(&clean);
        let sp = apply(&clean, &NoiseSpec::speckle(500.0, 42)).unwrap();
        let u0 = to_unit(&sp);
        let cfg = SolverConfig {
            eps0: 0.015,
            dt: 0.003,
            ..base.clone()
        };
        let (w, h) = u0.dims();
        let local_flat = |x: usize, y: usize| {
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for dy in -2isize..=2 {
                for dx in -2isize..=2 {
                    let s = clean_unit.get_replicate(x as isize + dx, y as isize + dy);
                    lo = lo.min(s);
                    hi = hi.max(s);
                }
            }
            (hi - lo) * 255.0 < 14.0
        };
        let mut u = u0.clone();
        for i in 1..=35usize {
            let pc = analyze(&u, &PCParams::default()).unwrap();
            let g = adjust_factor(&pc.m_norm, 2).unwrap();
            if [1, 5, 10, 15, 25, 35].contains(&i) {
                let mut vals: Vec<f64> = g.as_slice().to_vec();
                vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
                let q = |p: f64| vals[((vals.len() - 1) as f64 * p) as usize];
                let mut sums = [[0.0f64; 2]; 3];
                let mut counts = [[0usize; 2]; 3];
                for y in 0..h {
                    for x in 0..w {
                        let b = clean_unit.get(x, y) * 255.0;
                        let bi = if b < 95.0 { 0 } else if b < 150.0 { 1 } else { 2 };
                        let f = usize::from(local_flat(x, y));
                        sums[bi][f] += g.get(x, y);
                        counts[bi][f] += 1;
                    }
                }
                println!(
                    "iter {i:2}: g p10={:.3} p50={:.3} mean={:.3}  class g: ds={:.2} df={:.2} ms={:.2} mf={:.2} bs={:.2} bf={:.2}  snr={:.3}",
                    q(0.1),
                    q(0.5),
                    g.mean(),
                    sums[0][0] / counts[0][0].max(1) as f64,
                    sums[0][1] / counts[0][1].max(1) as f64,
                    sums[1][0] / counts[1][0].max(1) as f64,
                    sums[1][1] / counts[1][1].max(1) as f64,
                    sums[2][0] / counts[2][0].max(1) as f64,
                    sums[2][1] / counts[2][1].max(1) as f64,
                    snr_db(&u, &clean_unit).unwrap()
                );
            }
            let stepped = mpc_step(&u, &u0, &g, &cfg).unwrap();
            u = fusion_median(&stepped, &g, cfg.dt).unwrap();
        }
    }
    if args.iter().any(|a| a == "sdiag") {
        // Where does each method win under speckle? Solve both at their peak
        // N, tile the squared-error difference, and rank the tiles.
        let noised = apply(&clean, &NoiseSpec::speckle(500.0, 42)).unwrap();
        let cfg = SolverConfig {
            eps0: 0.015,
            dt: 0.003,
            ..base.clone()
        };
        let cfg_mpc = SolverConfig {
            method: Method::MpcTv,
            ..cfg.clone()
        };
        let solve_n = |cfg: &SolverConfig, n: usize| {
            let c = SolverConfig {
                iterations: n,
                trace: false,
                ..cfg.clone()
            };
            solve(&to_unit(&noised), &c, None).unwrap().0
        };
        let tv = solve_n(&cfg, 33);
        let mpc = solve_n(&cfg_mpc, 42);
        let clean_unit = to_unit(&clean);
        let (w, h) = clean_unit.dims();
        let tile = 32usize;
        let (tw, th) = (w / tile, h / tile);
        let mut tiles: Vec<(f64, usize, usize)> = Vec::new();
        for ty in 0..th {
            for tx in 0..tw {
                let mut d = 0.0;
                for y in ty * tile..(ty + 1) * tile {
                    for x in tx * tile..(tx + 1) * tile {
                        let c = clean_unit.get(x, y);
                        let et = tv.get(x, y) - c;
                        let em = mpc.get(x, y) - c;
                        d += et * et - em * em;
                    }
                }
                tiles.push((d, tx, ty));
            }
        }
        tiles.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        println!("tiles where TV wins most (err2 diff, tile x, tile y; 32px tiles):");
        for (d, tx, ty) in tiles.iter().take(10) {
            println!("  {:+.5} at ({}, {}) px ({}, {})", d, tx, ty, tx * 32, ty * 32);
        }
        println!("tiles where MPC wins most:");
        for (d, tx, ty) in tiles.iter().rev().take(10) {
            println!("  {:+.5} at ({}, {}) px ({}, {})", d, tx, ty, tx * 32, ty * 32);
        }
        let net: f64 = tiles.iter().map(|t| t.0).sum();
        println!("net err2 diff (positive favors MPC): {net:+.5}");

        // Ablations: which MPC ingredient costs SNR under speckle?
        let cfg70 = SolverConfig {
            iterations: 70,
            ..cfg.clone()
        };
        report("  tv s500 (70)", &sweep(&clean, &noised, &cfg70));
        let full = SolverConfig {
            method: Method::MpcTv,
            ..cfg70.clone()
        };
        report("  mpc full", &sweep(&clean, &noised, &full));
        let unit_g = SolverConfig {
            force_unit_g: true,
            ..full.clone()
        };
        report("  mpc g=1 (fusion only)", &sweep(&clean, &noised, &unit_g));
        let no_fuse = SolverConfig {
            disable_fusion: true,
            ..full.clone()
        };
        report("  mpc no fusion (g only)", &sweep(&clean, &noised, &no_fuse));
    }
    if args.iter().any(|a| a == "sap") {
        let noised = apply(&clean, &NoiseSpec::salt_pepper_variance(900.0, 42)).unwrap();
        println!(
            "sap900: snr0={:.4}",
            snr_db(&noised, &clean).unwrap()
        );
        let med = mpctv_core::image::median3x3(&noised);
        println!(
            "median3x3: snr={:.4} mssim_plain={:.4}",
            snr_db(&med, &clean).unwrap(),
            mssim_plain(&med, &clean, 255.0).unwrap()
        );
        let cfg = SolverConfig {
            eps0: 0.03,
            dt: 0.006,
            ..base.clone()
        };
        report("tv sap900", &sweep(&clean, &noised, &cfg));
        let cfg_mpc = SolverConfig {
            method: Method::MpcTv,
            ..cfg.clone()
        };
        report("mpc sap900", &sweep(&clean, &noised, &cfg_mpc));
        let (tv_snr, tv_ms) = at_n(&clean, &noised, &cfg, 19);
        let (mpc_snr, mpc_ms) = at_n(&clean, &noised, &cfg_mpc, 25);
        println!("  tv@19: snr={tv_snr:.4} mssim_plain={tv_ms:.4}");
        println!("  mpc@25: snr={mpc_snr:.4} mssim_plain={mpc_ms:.4}");
    }
}
