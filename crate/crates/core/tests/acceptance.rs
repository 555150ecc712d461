//! Acceptance criteria 1 to 10. Runs without the libtest harness so that the
//! `criterion N: PASS|FAIL ...` lines are always printed; any failure makes the
//! target exit non-zero.

use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use minsurf::catalog::{verify_entry, Catalog, CatalogEntry};
use minsurf::enneper::{
    epicycloid_family, from_weierstrass, recover, scale_preserves_condition_a, scale_transform, to_weierstrass,
    validate, weierstrass_null, Immersion,
};
use minsurf::expr::{self, eval, Expr};
use minsurf::kalgebra::{phi_iso, Algebra, KScalar};
use num_rational::Ratio;

type FnPair = (fn(KScalar) -> KScalar, fn(f64) -> f64);

type Outcome = Result<String, String>;
type Criterion = fn() -> Outcome;

fn check(worst: f64, tol: f64, label: &str) -> Outcome {
    if worst < tol {
        Ok(format!("{label} max {worst:.3e} < {tol:e}"))
    } else {
        Err(format!("{label} max {worst:.3e} >= {tol:e}"))
    }
}

fn rel(a: KScalar, b: KScalar) -> f64 {
    (a - b).magnitude() / (1.0 + a.magnitude().max(b.magnitude()))
}

fn rel_f(a: f64, b: f64) -> f64 {
    (a - b).abs() / (1.0 + a.abs().max(b.abs()))
}

fn rel3(a: [f64; 3], b: [f64; 3]) -> f64 {
    (0..3).map(|k| rel_f(a[k], b[k])).fold(0.0, f64::max)
}

fn catalog() -> Catalog {
    Catalog::builtin()
}

fn entry_exprs(e: &CatalogEntry) -> Vec<(&'static str, Expr)> {
    let d = &e.data;
    let mut v = vec![("Lz", d.lz.clone()), ("Pz", d.pz.clone()), ("hz", d.hz.clone())];
    if let Some(c) = &d.closed {
        v.extend([("L", c.l.clone()), ("P", c.p.clone()), ("h", c.h.antecedent.clone())]);
    }
    v
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for alg in [Algebra::Complex, Algebra::Lorentz] {
        let e = KScalar::unit(alg);
        let one = KScalar::one(alg);
        for _ in 0..10_000 {
            let mut draw = || KScalar::new(alg, rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let (a, b, c) = (draw(), draw(), draw());
            let theta = a.re;
            let two = KScalar::real(alg, 2.0);
            let checks = [
                rel(a + b, b + a),
                rel(a * b, b * a),
                rel((a + b) + c, a + (b + c)),
                rel((a * b) * c, a * (b * c)),
                rel(a * (b + c), a * b + a * c),
                rel(a * one, a),
                rel(a + (-a), KScalar::zero(alg)),
                rel_f((a * b).norm_sq(), a.norm_sq() * b.norm_sq()),
                rel((a + b).exp(), a.exp() * b.exp()),
                rel(a.cosh() * a.cosh() - a.sinh() * a.sinh(), one),
                rel(a.cos() * a.cos() + a.sin() * a.sin(), one),
                rel(a.cosh(), (a.exp() + (-a).exp()).checked_div(two).unwrap()),
                rel(a.sinh(), (a.exp() - (-a).exp()).checked_div(two).unwrap()),
                rel((a + b).sin(), a.sin() * b.cos() + a.cos() * b.sin()),
                rel((a + b).cos(), a.cos() * b.cos() - a.sin() * b.sin()),
            ];
            worst = checks.into_iter().fold(worst, f64::max);
            let polar = match alg {
                Algebra::Complex => KScalar::complex(theta.cos(), theta.sin()),
                Algebra::Lorentz => KScalar::lorentz(theta.cosh(), theta.sinh()),
            };
            worst = worst.max(rel((e.scale(theta)).exp(), polar));
            if a.norm_sq().abs() > 1e-2 {
                worst = worst.max(rel(a * a.inv().unwrap(), one));
            }
            if alg == Algebra::Lorentz {
                let (pa, pb, pab, psum) =
                    (phi_iso(a).unwrap(), phi_iso(b).unwrap(), phi_iso(a * b).unwrap(), phi_iso(a + b).unwrap());
                worst = worst.max(rel_f(pab.0, pa.0 * pb.0)).max(rel_f(pab.1, pa.1 * pb.1));
                worst = worst.max(rel_f(psum.0, pa.0 + pb.0)).max(rel_f(psum.1, pa.1 + pb.1));
                let fs: [FnPair; 5] = [
                    (KScalar::exp, f64::exp),
                    (KScalar::sin, f64::sin),
                    (KScalar::cos, f64::cos),
                    (KScalar::sinh, f64::sinh),
                    (KScalar::cosh, f64::cosh),
                ];
                for (fk, fr) in fs {
                    let img = phi_iso(fk(a)).unwrap();
                    worst = worst.max(rel_f(img.0, fr(pa.0))).max(rel_f(img.1, fr(pa.1)));
                }
            }
        }
    }
    check(worst, 1e-10, "relative error over 2 x 10^4 points")
}

fn fd_derivative(e: &Expr, z: KScalar) -> Option<KScalar> {
    let h = 1e-6;
    let step = KScalar::real(z.algebra, h);
    let a = eval(e, z + step).ok()?;
    let b = eval(e, z - step).ok()?;
    Some((a - b).scale(0.5 / h))
}

fn criterion_2() -> Outcome {
    let cat = catalog();
    let mut worst_d = 0.0f64;
    let mut worst_cr = 0.0f64;
    let mut exprs = 0;
    for entry in cat.entries() {
        let alg = entry.data.algebra();
        let pts: Vec<(f64, f64)> =
            entry.data.domain.samples(alg).map_err(|e| e.to_string())?.into_iter().take(20).collect();
        for (label, e) in entry_exprs(entry) {
            exprs += 1;
            let d = e.deriv(alg);
            for &(s, t) in &pts {
                let z = entry.data.domain.z_at(alg, s, t);
                let sym = eval(&d, z).map_err(|err| format!("{} {label}: {err}", entry.name()))?;
                let fd = fd_derivative(&e, z).ok_or_else(|| format!("{} {label}: fd failed", entry.name()))?;
                worst_d = worst_d.max((sym - fd).magnitude() / sym.magnitude().max(1.0));
                // Cauchy-Riemann (complex) and para-Cauchy-Riemann (Lorentz):
                // a_u = b_v and a_v = eps * b_u with eps = e^2.
                let h = 1e-6;
                let f = |du: f64, dv: f64| eval(&e, KScalar::new(alg, z.re + du, z.im + dv)).unwrap();
                let fu = (f(h, 0.0) - f(-h, 0.0)).scale(0.5 / h);
                let fv = (f(0.0, h) - f(0.0, -h)).scale(0.5 / h);
                let eps = alg.unit_square();
                let scale = fu.magnitude().max(fv.magnitude()).max(1.0);
                let res = (fu.re - fv.im).abs().max((fv.re - eps * fu.im).abs()) / scale;
                if alg == Algebra::Lorentz {
                    worst_cr = worst_cr.max(res);
                }
            }
        }
    }
    check(worst_d, 1e-6, &format!("d/dz vs central differences, {exprs} expressions"))?;
    check(worst_cr, 1e-6, "para-Cauchy-Riemann residual")?;
    Ok(format!("{exprs} expressions, derivative err {worst_d:.2e}, para-CR {worst_cr:.2e}"))
}

fn criterion_3() -> Outcome {
    let cat = catalog();
    if cat.entries().len() < 20 {
        return Err(format!("only {} entries", cat.entries().len()));
    }
    let mut worst_a = 0.0f64;
    let mut min_b = f64::INFINITY;
    for e in cat.entries() {
        let r = validate(&e.data).map_err(|err| format!("{}: {err}", e.name()))?;
        if !r.pass {
            return Err(format!("{}: {:?}", e.name(), r.failures()));
        }
        if r.samples < 400 {
            return Err(format!("{}: only {} samples", e.name(), r.samples));
        }
        worst_a = worst_a.max(r.max_condition_a);
        min_b = min_b.min(r.min_condition_b);
    }
    check(worst_a, 1e-10, "condition A")?;
    if min_b <= 1e-8 {
        return Err(format!("condition B margin {min_b:e}"));
    }
    Ok(format!("{} entries, max A {worst_a:.2e}, min |B| {min_b:.3e}", cat.entries().len()))
}

fn criterion_4() -> Outcome {
    let cat = catalog();
    let (mut h, mut c, mut m) = (0.0f64, 0.0f64, 0.0f64);
    for e in cat.entries() {
        let r = verify_entry(e).map_err(|err| format!("{}: {err}", e.name()))?;
        if !r.metric_pass() {
            return Err(format!("{}: metric check failed", e.name()));
        }
        h = h.max(r.max_abs_h);
        c = c.max(r.max_conformality);
        m = m.max(r.max_harmonicity);
    }
    check(h, 1e-6, "|H|")?;
    check(c, 1e-6, "conformality")?;
    check(m, 1e-5, "harmonicity")?;
    Ok(format!("|H| {h:.2e}, conformality {c:.2e}, harmonicity {m:.2e}"))
}

fn criterion_5() -> Outcome {
    let cat = catalog();
    let mut worst = 0.0f64;
    let mut count = 0;
    for e in cat.entries().iter().filter(|e| e.implicit.is_some()) {
        count += 1;
        let r = verify_entry(e).map_err(|err| format!("{}: {err}", e.name()))?;
        worst = worst.max(r.max_implicit.expect("implicit requested"));
    }
    if count < 17 {
        return Err(format!("only {count} entries carry an implicit equation"));
    }
    check(worst, 1e-9, &format!("implicit residual over {count} entries"))
}

fn criterion_6() -> Outcome {
    let cat = catalog();
    let (mut worst, mut worst_path) = (0.0f64, 0.0f64);
    for e in cat.entries() {
        let alg = e.data.algebra();
        let closed = Immersion::closed(&e.data).map_err(|err| format!("{}: {err}", e.name()))?.normalized().unwrap();
        let integ = Immersion::integral(&e.data);
        let b = e.data.domain.basepoint;
        for (s, t) in e.data.domain.random_points(alg, 20, 0x6a09_e667) {
            let a = closed.eval(s, t).unwrap();
            let i = integ.eval(s, t).map_err(|err| format!("{}: {err}", e.name()))?;
            worst = worst.max(rel3(a, i));
            let p1 = integ.eval_along(&[b, (s, b.1), (s, t)]).map_err(|err| format!("{}: {err}", e.name()))?;
            let p2 = integ.eval_along(&[b, (b.0, t), (s, t)]).map_err(|err| format!("{}: {err}", e.name()))?;
            worst_path = worst_path.max(rel3(p1, p2));
        }
    }
    check(worst, 1e-8, "integral vs closed form")?;
    check(worst_path, 1e-8, "path independence")?;
    Ok(format!("closed vs integral {worst:.2e}, two polylines {worst_path:.2e}"))
}

fn criterion_7() -> Outcome {
    let cat = catalog();
    let (mut worst, mut null) = (0.0f64, 0.0f64);
    for e in cat.entries() {
        let w = to_weierstrass(&e.data);
        let back = from_weierstrass(&w, e.name()).map_err(|err| format!("{}: {err}", e.name()))?;
        for (s, t) in e.data.domain.samples(e.data.algebra()).unwrap() {
            let x = e.data.eval_at(s, t).unwrap();
            let y = back.eval_at(s, t).unwrap();
            for k in 0..3 {
                worst = worst.max(rel(x[k], y[k]));
            }
            null = null.max(weierstrass_null(w.eval_at(s, t).unwrap()));
        }
    }
    check(worst, 1e-12, "round trip")?;
    check(null, 1e-12, "null condition")?;
    Ok(format!("round trip {worst:.2e}, null residual {null:.2e}"))
}

fn criterion_8() -> Outcome {
    let cat = catalog();
    let helicoid = cat.get("timelike-helicoid-1st").unwrap();
    let catalan = cat.get("timelike-catalan-1st").unwrap();
    let f = expr::parse("2*sin(z)", Algebra::Lorentz).unwrap();
    if !scale_preserves_condition_a(&helicoid.data, &f) {
        return Err("symbolic condition A not preserved".into());
    }
    let scaled = scale_transform(&helicoid.data, &f, "scaled").map_err(|e| e.to_string())?;
    let integ = Immersion::integral(&scaled);
    let closed = Immersion::closed(&catalan.data).unwrap().normalized().unwrap();
    let mut worst_catalan = 0.0f64;
    for (s, t) in scaled.domain.samples(Algebra::Lorentz).unwrap().into_iter().step_by(5) {
        worst_catalan =
            worst_catalan.max(rel3(integ.eval(s, t).map_err(|e| e.to_string())?, closed.eval(s, t).unwrap()));
    }
    check(worst_catalan, 1e-8, "Catalan immersion")?;

    let elliptic = cat.get("elliptic-catenoid").unwrap();
    let target = cat.get("helicoid-1st-kind").unwrap();
    let i = expr::parse("i", Algebra::Complex).unwrap();
    let rotated = scale_transform(&elliptic.data, &i, "rotated").map_err(|e| e.to_string())?;
    let mut worst_i = 0.0f64;
    for (s, t) in elliptic.data.domain.samples(Algebra::Complex).unwrap() {
        let (x, y) = (rotated.eval_at(s, t).unwrap(), target.data.eval_at(s, t).unwrap());
        for k in 0..3 {
            worst_i = worst_i.max((x[k] - y[k]).magnitude());
        }
    }
    check(worst_i, 1e-12, "f = i data")?;

    for n in 2..=6 {
        let fam = epicycloid_family(n).map_err(|e| e.to_string())?;
        if fam.fixed_radius != Ratio::new(2, n * n - 1) || fam.rolling_radius != Ratio::new(1, n + 1) {
            return Err(format!("radii for n = {n}"));
        }
    }
    let (two, three) = (epicycloid_family(2).unwrap(), epicycloid_family(3).unwrap());
    if two.fixed_radius != two.rolling_radius * 2 || three.fixed_radius != three.rolling_radius {
        return Err("nephroid / cardioid radii".into());
    }
    Ok(format!("Catalan {worst_catalan:.2e}, f = i {worst_i:.2e}, R = 2r at n = 2, R = r at n = 3"))
}

fn criterion_9() -> Outcome {
    let cat = catalog();
    let mut worst = 0.0f64;
    for name in ["elliptic-catenoid", "lorentzian-hyperbolic-catenoid-1st", "enneper-1st-kind"] {
        let e = cat.get(name).unwrap();
        let pts = e.data.domain.samples(e.data.algebra()).unwrap();
        let rec = recover(&Immersion::closed(&e.data).unwrap(), &pts).map_err(|err| format!("{name}: {err}"))?;
        for r in &rec.samples {
            let want = e.data.eval_at(r.point.0, r.point.1).unwrap();
            for (got, w) in [r.lz, r.pz, r.hz].into_iter().zip(want) {
                worst = worst.max((got - w).magnitude());
            }
        }
    }
    check(worst, 1e-6, "recovered data")
}

fn run_cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_surfaces"))
        .args(args)
        .env_remove("SURF_CATALOG_DIR")
        .output()
        .expect("run surfaces")
}

fn criterion_10() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    for (name, format) in
        [("elliptic-catenoid", "obj"), ("lorentzian-enneper", "csv"), ("timelike-helicoid-2nd-b", "obj")]
    {
        let mut files = Vec::new();
        for k in 0..2 {
            let path = dir.path().join(format!("{name}-{k}.{format}"));
            let out =
                run_cli(&["sample", name, "--grid", "24x16", "--format", format, "--out", path.to_str().unwrap()]);
            if !out.status.success() {
                return Err(format!("sample {name} failed: {}", String::from_utf8_lossy(&out.stderr)));
            }
            files.push(std::fs::read(&path).map_err(|e| e.to_string())?);
        }
        if files[0] != files[1] || files[0].is_empty() {
            return Err(format!("{name}: outputs differ"));
        }
    }
    let out = run_cli(&["verify", "--all"]);
    match out.status.code() {
        Some(0) => Ok("byte-identical samples, verify --all exit 0".into()),
        other => Err(format!("verify --all exit {other:?}")),
    }
}

fn main() {
    let criteria: [(&str, Criterion); 10] = [
        ("algebra suite", criterion_1),
        ("parser / derivative suite", criterion_2),
        ("condition suite", criterion_3),
        ("minimality", criterion_4),
        ("implicit equations", criterion_5),
        ("representation equivalence", criterion_6),
        ("Weierstrass round trip", criterion_7),
        ("scale transforms and epicycloid family", criterion_8),
        ("recovery", criterion_9),
        ("CLI determinism", criterion_10),
    ];
    let mut failed = 0;
    for (k, (what, run)) in criteria.into_iter().enumerate() {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {what} ({detail})", k + 1),
            Err(detail) => {
                println!("criterion {}: FAIL {what} ({detail})", k + 1);
                failed += 1;
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
