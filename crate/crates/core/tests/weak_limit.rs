use ginlab::det_kernels::{weak_correlation, weak_density, DetKernel, WeakLimitContext};
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn finite_elliptic_kernel_approaches_weak_limit() {
    for x in [0.0, 6.0] {
        let ctx = WeakLimitContext::new(1.0, x, 400).unwrap();
        let k = DetKernel::elliptic(400, ctx.tau()).unwrap();
        let rho = ctx.unfolding_density();
        for y in [0.0, 0.3, 1.0] {
            let finite = k.density(ctx.fold(c(0.0, y))).unwrap() / rho.powi(2);
            let limit = weak_density(&ctx, c(0.0, y)).unwrap();
            assert!((finite / limit - 1.0).abs() < 2e-3, "x={x} y={y}: {finite} vs {limit}");
        }
        let zs = [c(0.0, 0.3), c(0.5, -0.2)];
        let finite = k.correlation(&[ctx.fold(zs[0]), ctx.fold(zs[1])]).unwrap() / rho.powi(4);
        let limit = weak_correlation(&ctx, &zs).unwrap();
        assert!((finite / limit - 1.0).abs() < 5e-3, "x={x}: {finite} vs {limit}");
    }
}

#[test]
fn fold_inverts_unfold() {
    let ctx = WeakLimitContext::new(0.7, 2.0, 100).unwrap();
    let z = c(1.7, -0.05);
    assert!((ctx.fold(ctx.unfold(z)) - z).norm() < 1e-14);
    assert!((ctx.unfolding_density() / ctx.local_density() - 1.0).abs() < 0.02);
}
