use std::f64::consts::{PI, SQRT_2};
use std::time::Instant;

use faer::Mat;
use ginlab::det_kernels::{ginibre_edge_profile, weak_correlation, weak_density, DetKernel, WeakLimitContext};
use ginlab::ensembles::{sample_spectra, EnsembleSpec, SamplerConfig, SymmetryClass};
use ginlab::gap_stats::{gap_ginibre, gap_truncation, nn_density_ginibre};
use ginlab::mc_verify::{
    ginibre_pair_ratio_bin, run_suites, DensityAccumulator, DensityGrid, PairAccumulator, Suite, SuiteOptions,
};
use ginlab::pfaff_kernels::{
    density_real_circular, expected_real_count, kernel_real_circular, limit_kernel, pfaffian, skew_form,
    skew_moment_matrix, weak_density_profile, LimitRegime, PfaffKernel, SkewBasis,
};
use ginlab::quadrature::{integrate, integrate_2d, integrate_to_infinity, QuadConfig};
use ginlab::specfun::{erfc, regularized_upper_gamma};
use ginlab::Result;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{workers, Criterion, Verdict};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

fn max_abs(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |m, v| m.max(v.abs()))
}

fn edges(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).round() as usize;
    (0..=n).map(|i| lo + i as f64 * step).collect()
}

pub fn all() -> Vec<Criterion> {
    vec![
        Criterion { id: 1, title: "circular law, Monte Carlo radial density", run: circular_law },
        Criterion { id: 2, title: "Ginibre edge profile", run: edge_profile },
        Criterion { id: 3, title: "gap probability at small s", run: gap_small_s },
        Criterion { id: 4, title: "bulk pair correlation, Monte Carlo", run: bulk_pair_correlation },
        Criterion { id: 5, title: "expected number of real eigenvalues", run: real_count },
        Criterion { id: 6, title: "real Ginibre densities", run: real_densities },
        Criterion { id: 7, title: "Pfaffian kernel, three evaluation paths", run: pfaffian_paths },
        Criterion { id: 8, title: "skew-orthogonality of the elliptic bases", run: skew_orthogonality },
        Criterion { id: 9, title: "elliptic laws", run: elliptic_laws },
        Criterion { id: 10, title: "weak non-Hermiticity", run: weak_non_hermiticity },
        Criterion { id: 11, title: "truncated unitary ensemble", run: truncated_unitary },
        Criterion { id: 12, title: "Pfaffian algebra and kernel normalization", run: pfaffian_algebra },
    ]
}

fn circular_law() -> Result<Verdict> {
    let mut v = Verdict::default();
    let start = Instant::now();
    let n = 64;
    let spec = EnsembleSpec::circular(SymmetryClass::Complex, n)?;
    let mut acc = DensityAccumulator::new(DensityGrid::Radial { edges: edges(0.0, 9.0, 0.25) })?;
    for s in sample_spectra(&spec, 2000, &SamplerConfig::new(1).with_workers(workers()))? {
        acc.push(&s?);
    }
    let est = acc.finish()?;
    let DensityGrid::Radial { edges } = &est.grid else { unreachable!() };
    let cfg = QuadConfig::with_tol(1e-13, 1e-11);
    let mut z = Vec::new();
    for (i, w) in edges.windows(2).enumerate() {
        // average of Q(N, r²)/π over the annulus, in the variable u = r²
        let (u0, u1) = (w[0] * w[0], w[1] * w[1]);
        let mass = integrate(|u| regularized_upper_gamma(n as u32, u).unwrap_or(f64::NAN), u0, u1, &cfg)?.value;
        let exact = mass / (PI * (u1 - u0));
        z.push((est.density[i] - exact) / est.stderr[i]);
    }
    let worst = max_abs(z.iter().copied());
    v.check("all 36 bins r <= 9 within 4 sigma", worst <= 4.0 && worst.is_finite(), format!("max |z| = {worst:.3}"));
    let secs = start.elapsed().as_secs_f64();
    v.check("runtime <= 120 s", secs <= 120.0, format!("{secs:.1} s"));
    Ok(v)
}

fn edge_profile() -> Result<Verdict> {
    let mut v = Verdict::default();
    let n = 400;
    let k = DetKernel::ginibre(n)?;
    let r0 = (n as f64).sqrt();
    let mut worst = 0.0f64;
    for i in 0..=600 {
        let x = -3.0 + i as f64 * 0.01;
        let d = k.density(c(r0 + x, 0.0))?;
        worst = worst.max((d - ginibre_edge_profile(x)).abs());
    }
    v.at_most("max |R1(sqrt(N)+x) - erfc(sqrt(2) x)/(2 pi)|, N = 400, x in [-3, 3]", worst, 5e-3);
    Ok(v)
}

fn gap_small_s() -> Result<Verdict> {
    let mut v = Verdict::default();
    let s: f64 = 0.1;
    let series = 1.0 - s.powi(4) / 2.0 + s.powi(6) / 6.0 - s.powi(8) / 24.0;
    v.at_most("|H(0.1) - (1 - s^4/2 + s^6/6 - s^8/24)|", gap_ginibre(None, s)? - series, 1e-10);
    let s: f64 = 0.05;
    let ratio = nn_density_ginibre(None, s)? / (2.0 * s.powi(3));
    v.at_most("|p(0.05)/(2 s^3) - 1|", ratio - 1.0, 1e-3);
    Ok(v)
}

fn bulk_pair_correlation() -> Result<Verdict> {
    let mut v = Verdict::default();
    let spec = EnsembleSpec::circular(SymmetryClass::Complex, 64)?;
    let s_edges = edges(0.2, 2.0, 0.2);
    let mut acc = PairAccumulator::new(c(0.0, 0.0), 1.0, s_edges)?;
    for s in sample_spectra(&spec, 100_000, &SamplerConfig::new(4).with_workers(workers()))? {
        acc.push(&s?);
    }
    let pc = acc.finish()?;
    let (ratio, err) = pc.ratio(1.0 / PI);
    let mut worst = 0.0f64;
    for (i, w) in pc.s_edges.windows(2).enumerate() {
        match (ratio[i], err[i]) {
            (Some(r), Some(e)) if e > 0.0 => worst = worst.max(((r - ginibre_pair_ratio_bin(w[0], w[1])) / e).abs()),
            _ => worst = f64::INFINITY,
        }
    }
    v.check(
        "R2/R1^2 vs 1 - exp(-s^2) on 9 bins in [0.2, 2], 1e5 samples",
        worst <= 4.0,
        format!("max |z| = {worst:.3}, {} centres", pc.samples),
    );
    Ok(v)
}

fn real_count() -> Result<Verdict> {
    let mut v = Verdict::default();
    let cfg = QuadConfig::with_tol(1e-13, 1e-12);
    for (n, seed) in [(2usize, 21u64), (10, 22)] {
        let quad = 2.0 * integrate_to_infinity(|x| density_real_circular(n, x).unwrap_or(f64::NAN), 0.0, &cfg)?.value;
        if n == 2 {
            v.at_most("N = 2 quadrature value - sqrt(2)", quad - SQRT_2, 1e-10);
        }
        let spec = EnsembleSpec::circular(SymmetryClass::Real, n)?;
        let (mut sum, mut sum_sq, mut count) = (0.0, 0.0, 0.0);
        for s in sample_spectra(&spec, 100_000, &SamplerConfig::new(seed).with_workers(workers()))? {
            let k = s?.real_count() as f64;
            sum += k;
            sum_sq += k * k;
            count += 1.0;
        }
        let mean = sum / count;
        let se = ((sum_sq / count - mean * mean) * count / (count - 1.0) / count).sqrt();
        let z = (mean - quad) / se;
        v.check(
            format!("N = {n}: Monte Carlo mean within 3 sigma of the quadrature"),
            z.abs() <= 3.0,
            format!("mean {mean:.5} +- {se:.5}, exact {quad:.10}, z = {z:.3}"),
        );
    }
    let ratio = expected_real_count(100)? / (200.0 / PI).sqrt();
    v.check(
        "E_100 / sqrt(200/pi) in [0.98, 1.05]",
        (0.98..=1.05).contains(&ratio),
        format!("{ratio:.6} (E_100 = {:.6})", expected_real_count(100)?),
    );
    Ok(v)
}

fn real_densities() -> Result<Verdict> {
    let mut v = Verdict::default();
    let spec = EnsembleSpec::circular(SymmetryClass::Real, 20)?;
    let opts = SuiteOptions { workers: workers(), ..SuiteOptions::new(6, 100_000) };
    for r in run_suites(&spec, &[Suite::Density], &opts)? {
        let worst = r.max_abs_z();
        v.check(
            format!("{} at N = 20, 1e5 samples", r.statistic),
            worst <= 4.0,
            format!("max |z| = {worst:.3} over {} bins", r.z.len()),
        );
    }
    let d = density_real_circular(100, 0.0)?;
    v.at_most("R1^R(0) at N = 100 minus 1/sqrt(2 pi)", d - 1.0 / (2.0 * PI).sqrt(), 1e-3);
    Ok(v)
}

fn pfaffian_paths() -> Result<Verdict> {
    let mut v = Verdict::default();
    let points = [(c(1.0, 1.0), c(2.0, -1.0)), (c(0.3, 0.2), c(-0.7, 0.5)), (c(-1.5, 0.8), c(0.4, -2.2))];
    let (mut basis_err, mut moment_err) = (0.0f64, 0.0f64);
    for n in (2..=12).step_by(2) {
        let basis = PfaffKernel::new(SymmetryClass::Real, 0.0, n)?;
        let moments = skew_moment_matrix(SymmetryClass::Real, 0.0, n)?;
        for &(z1, z2) in &points {
            let closed = kernel_real_circular(n, z1, z2)?;
            basis_err = basis_err.max(rel(basis.kernel(z1, z2)?, closed));
            moment_err = moment_err.max(rel(moments.kernel(z1, z2), closed));
        }
    }
    v.at_most("closed form vs skew-orthogonal basis sum, N = 2..12", basis_err, 1e-10);
    v.at_most("closed form vs moment-matrix inverse, N = 2..12", moment_err, 1e-10);
    Ok(v)
}

fn skew_orthogonality() -> Result<Verdict> {
    let mut v = Verdict::default();
    let (tau, n) = (0.5, 6);
    let cfg = QuadConfig::with_tol(1e-12, 1e-10);
    let extent = (n as f64).sqrt() + 8.0;
    for class in [SymmetryClass::Real, SymmetryClass::Quaternion] {
        let basis = SkewBasis::new(class, tau, n)?;
        let mut worst = 0.0f64;
        for k in 0..n {
            for l in k + 1..n {
                let g = skew_form(
                    class,
                    tau,
                    extent,
                    |z| basis.eval(k, z).unwrap_or(c(f64::NAN, 0.0)),
                    |z| basis.eval(l, z).unwrap_or(c(f64::NAN, 0.0)),
                    &cfg,
                )?;
                let scale = basis.norm(k - k % 2);
                let want = if k % 2 == 0 && l == k + 1 { basis.norm(k) } else { 0.0 };
                worst = worst.max((g - want).abs() / scale);
            }
        }
        v.at_most(format!("{} skew Gram matrix vs r_m Z, tau = 0.5, N = 6", class.name()), worst, 1e-5);
    }
    Ok(v)
}

fn inside_ellipse_fraction(spec: &EnsembleSpec, samples: u64, seed: u64) -> Result<f64> {
    let (n, tau) = (spec.dim() as f64, spec.tau());
    let (ax, ay) = (1.02 * n.sqrt() * (1.0 + tau), 1.02 * n.sqrt() * (1.0 - tau));
    let (mut inside, mut total) = (0usize, 0usize);
    for s in sample_spectra(spec, samples, &SamplerConfig::new(seed).with_workers(workers()))? {
        for z in s?.eigenvalues() {
            total += 1;
            if (z.re / ax).powi(2) + (z.im / ay).powi(2) <= 1.0 {
                inside += 1;
            }
        }
    }
    Ok(inside as f64 / total as f64)
}

fn elliptic_laws() -> Result<Verdict> {
    let mut v = Verdict::default();
    let (n, tau) = (400, 0.5);
    let bulk = 1.0 / (PI * (1.0 - tau * tau));
    let complex = DetKernel::elliptic(n, tau)?.density(c(0.0, 0.0))?;
    v.at_most("complex elliptic R1(0) relative to 1/(pi(1 - tau^2))", complex / bulk - 1.0, 0.03);
    let real = PfaffKernel::new(SymmetryClass::Real, tau, n)?;
    let rc = real.density_complex(c(1.0, 5.0))?;
    v.at_most("real elliptic R1^C(1 + 5i) relative to 1/(pi(1 - tau^2))", rc / bulk - 1.0, 0.03);
    let rr = real.density_real(0.0)?;
    v.at_most(
        "real elliptic R1^R(0) relative to 1/sqrt(2 pi (1 - tau^2))",
        rr * (2.0 * PI * (1.0 - tau * tau)).sqrt() - 1.0,
        0.03,
    );
    for (class, seed) in [(SymmetryClass::Complex, 91), (SymmetryClass::Real, 92)] {
        let spec = EnsembleSpec::elliptic(class, n, tau)?;
        let frac = inside_ellipse_fraction(&spec, 10, seed)?;
        v.check(
            format!("{} elliptic: eigenvalues inside the 1.02-inflated ellipse", class.name()),
            frac >= 0.98,
            format!("{:.4} of {} eigenvalues", frac, 10 * n),
        );
    }
    Ok(v)
}

fn weak_non_hermiticity() -> Result<Verdict> {
    let mut v = Verdict::default();
    let tight = QuadConfig::with_tol(1e-13, 1e-12);

    // normalization of the limiting densities
    let mut worst = 0.0f64;
    for a in [0.3, 1.0, 3.0] {
        let ctx = WeakLimitContext::new(a, 0.0, 100)?;
        let total =
            2.0 * integrate_to_infinity(|y| weak_density(&ctx, c(0.0, y)).unwrap_or(f64::NAN), 0.0, &tight)?.value;
        worst = worst.max((total - 1.0).abs());
        for class in [SymmetryClass::Real, SymmetryClass::Quaternion] {
            let singular = weak_density_profile(class, 0.0, a)?.0;
            let smooth = integrate_to_infinity(
                |y| weak_density_profile(class, y, a).map(|p| p.1).unwrap_or(f64::NAN),
                0.0,
                &tight,
            )?
            .value;
            worst = worst.max((singular + 2.0 * smooth - 1.0).abs());
        }
    }
    v.at_most("complex, real and qu-r weak densities integrate to 1, a in {0.3, 1, 3}", worst, 1e-6);

    // finite N = 400 at a = 1, unfolded around x = 0
    let n = 400;
    let ctx = WeakLimitContext::new(1.0, 0.0, n)?;
    let (rho_t, rho_sc, alpha) = (ctx.unfolding_density(), ctx.local_density(), ctx.alpha());
    let complex = DetKernel::elliptic(n, ctx.tau())?;
    let mut worst = 0.0f64;
    for y in [0.0, 0.3, 1.0] {
        let finite = complex.density(ctx.fold(c(0.0, y)))? / rho_t.powi(2);
        worst = worst.max(finite / weak_density(&ctx, c(0.0, y))? - 1.0);
    }
    let zs = [c(0.0, 0.3), c(0.5, -0.2)];
    let finite = complex.correlation(&[ctx.fold(zs[0]), ctx.fold(zs[1])])? / rho_t.powi(4);
    worst = worst.max(finite / weak_correlation(&ctx, &zs)? - 1.0);
    v.at_most("complex: finite-N density and R2 vs weak-limit forms", worst, 5e-3);

    let pairs = [(c(0.3, 0.4), c(-0.2, 0.1)), (c(0.0, 0.5), c(0.0, -0.5)), (c(1.0, 0.2), c(-0.5, 0.7))];
    for class in [SymmetryClass::Real, SymmetryClass::Quaternion] {
        let k = PfaffKernel::new(class, ctx.tau(), n)?;
        let mut worst = 0.0f64;
        for &(w1, w2) in &pairs {
            let finite = k.kernel(ctx.fold(w1), ctx.fold(w2))? / rho_t.powi(2);
            let limit = limit_kernel(class, LimitRegime::Weak { n, alpha }, w1 / rho_sc, w2 / rho_sc)? / rho_sc.powi(2);
            worst = worst.max(rel(finite, limit));
        }
        let name = if class == SymmetryClass::Real { "weakrK" } else { "weakqK" };
        v.at_most(format!("{}: finite-N kernel vs {name}", class.name()), worst, 5e-3);

        let mut dens = 0.0f64;
        for y in [0.2, 0.5, 1.0] {
            let finite = k.density_complex(ctx.fold(c(0.0, y)))? / rho_t.powi(2);
            dens = dens.max((finite / weak_density_profile(class, y, 1.0)?.1 - 1.0).abs());
        }
        if class == SymmetryClass::Real {
            let finite = k.density_real(0.0)? / rho_t;
            dens = dens.max((finite / weak_density_profile(class, 0.0, 1.0)?.0 - 1.0).abs());
        }
        v.at_most(format!("{}: finite-N density vs P(y, a)", class.name()), dens, 5e-3);
    }

    // a -> 0: concentration on the axis
    let a = 0.02;
    let ctx = WeakLimitContext::new(a, 0.0, 100)?;
    let near = 2.0 * integrate(|y| weak_density(&ctx, c(0.0, y)).unwrap_or(f64::NAN), 0.0, 3.0 * a, &tight)?.value;
    v.check("a = 0.02: complex mass within |y| <= 3a", near >= 0.99, format!("{near:.6}"));
    let singular = weak_density_profile(SymmetryClass::Real, 0.0, a)?.0;
    v.check("a = 0.02: real weight on the real axis", singular >= 0.95, format!("{singular:.6}"));
    let qr_near = 2.0
        * integrate(
            |y| weak_density_profile(SymmetryClass::Quaternion, y, a).map(|p| p.1).unwrap_or(f64::NAN),
            0.0,
            5.0 * a,
            &tight,
        )?
        .value;
    v.check("a = 0.02: qu-r mass within |y| <= 5a", qr_near >= 0.99, format!("{qr_near:.6}"));

    // a -> infinity: flat density 1/(2 pi a^2). The real and qu-r profiles keep
    // a layer of width ~a^2 (one Ginibre spacing) at the axis, as finite real
    // Ginibre matrices do, so their flatness is read off beyond it.
    let a: f64 = 10.0;
    let ctx = WeakLimitContext::new(a, 0.0, 100)?;
    let flat = 1.0 / (2.0 * PI * a * a);
    let mut worst = 0.0f64;
    for y in [0.0, 0.25 * a * a, 0.5 * a * a, a * a] {
        worst = worst.max((weak_density(&ctx, c(0.0, y))? / flat - 1.0).abs());
    }
    v.at_most("a = 10: complex density vs 1/(2 pi a^2) for |y| <= a^2", worst, 0.01);
    let mut worst = 0.0f64;
    for class in [SymmetryClass::Real, SymmetryClass::Quaternion] {
        for y in [a * a, 1.5 * a * a] {
            worst = worst.max((weak_density_profile(class, y, a)?.1 / flat - 1.0).abs());
        }
    }
    v.at_most("a = 10: real and qu-r densities vs 1/(2 pi a^2) for |y| in [a^2, 1.5 a^2]", worst, 0.01);
    let singular = weak_density_profile(SymmetryClass::Real, 0.0, a)?.0;
    v.check("a = 10: real weight on the real axis is small", singular <= 0.05, format!("{singular:.6}"));
    Ok(v)
}

fn truncated_unitary() -> Result<Verdict> {
    let mut v = Verdict::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    for m in [1usize, 4, 13, 30] {
        for l in [1usize, 6, 17, 30] {
            let k = DetKernel::truncated_unitary(m, l)?;
            for _ in 0..8 {
                let z1 = Complex64::from_polar(rng.random_range(0.0..0.95), rng.random_range(0.0..2.0 * PI));
                let z2 = Complex64::from_polar(rng.random_range(0.0..0.95), rng.random_range(0.0..2.0 * PI));
                worst = worst.max(rel(k.kernel(z1, z2)?, k.kernel_binomial_sum(z1, z2)?));
            }
        }
    }
    v.at_most("incomplete-beta kernel vs binomial sum, M, L <= 30", worst, 1e-10);

    // edge: R1 divided by the local bulk density against (1/2) erfc
    let (m, l) = (200usize, 200usize);
    let alpha = m as f64 / l as f64;
    let r0 = (alpha / (1.0 + alpha)).sqrt();
    let mut worst = 0.0f64;
    for i in 0..=300 {
        let x = -1.5 + i as f64 * 0.01;
        let r = r0 + x / (m as f64).sqrt();
        let density = ginlab::det_kernels::truncation_strong_density(m, l, c(r, 0.0))?;
        let bulk = m as f64 / (PI * alpha) / (1.0 - r * r).powi(2);
        let profile = 0.5 * erfc(SQRT_2 * (1.0 + alpha) / alpha.sqrt() * x);
        worst = worst.max((density / bulk - profile).abs());
    }
    v.at_most("M = L = 200 edge: |R1/R1_bulk - erfc(2 sqrt(2) x)/2| for x in [-1.5, 1.5]", worst, 0.02);

    let mut worst = 0.0f64;
    for i in 0..=30 {
        let s = i as f64 * 0.1;
        worst = worst.max((gap_truncation(m, l, s / (l as f64).sqrt())? - gap_ginibre(None, s)?).abs());
    }
    v.at_most("M = L = 200 gap at s/sqrt(L) vs Ginibre N = inf, s in [0, 3]", worst, 1e-2);
    Ok(v)
}

fn pfaffian_algebra() -> Result<Verdict> {
    let mut v = Verdict::default();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut worst = 0.0f64;
    for trial in 0..200 {
        let n = 2 * (1 + trial % 10);
        let mut a = Mat::<Complex64>::zeros(n, n);
        for i in 0..n {
            for j in i + 1..n {
                let z = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                a[(i, j)] = z;
                a[(j, i)] = -z;
            }
        }
        let pf = pfaffian(&a)?;
        worst = worst.max(rel(pf * pf, a.as_ref().determinant()));
    }
    v.at_most("Pf(A)^2 vs det(A), 200 random antisymmetric matrices", worst, 1e-9);

    let cfg = QuadConfig::with_tol(1e-10, 1e-9);
    for n in [4usize, 6] {
        let k = PfaffKernel::new(SymmetryClass::Real, 0.0, n)?;
        let extent = (n as f64).sqrt() + 8.0;
        let upper = integrate_2d(
            |x, y| if y > 0.0 { k.density_complex(c(x, y)).unwrap_or(f64::NAN) } else { 0.0 },
            (-extent, extent),
            (0.0, extent),
            &cfg,
        )?
        .value;
        let real = 2.0 * integrate_to_infinity(|x| k.density_real(x).unwrap_or(f64::NAN), 0.0, &cfg)?.value;
        v.at_most(format!("real N = {n}: integral of R1 minus N"), 2.0 * upper + real - n as f64, 1e-5);
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ginlab::ensembles::Variant;

    #[test]
    fn criteria_are_numbered_in_order() {
        let ids: Vec<u32> = all().iter().map(|c| c.id).collect();
        assert_eq!(ids, (1..=12).collect::<Vec<_>>());
    }

    #[test]
    fn grid_edges() {
        let e = edges(0.2, 2.0, 0.2);
        assert_eq!(e.len(), 10);
        assert!((e[9] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn variant_of_elliptic_spec() {
        let spec = EnsembleSpec::elliptic(SymmetryClass::Real, 4, 0.5).unwrap();
        assert_eq!(spec.variant(), Variant::Elliptic { tau: 0.5 });
    }
}
