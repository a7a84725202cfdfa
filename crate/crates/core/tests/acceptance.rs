//! One PASS/FAIL line per acceptance criterion. Runs without the libtest
//! harness so the report is always printed.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use srk::bernstein::{binomial, dim_pk, multi_indices, BBPoly, LinearFunctional};
use srk::bubble::check_bubble_shift;
use srk::dofs::{unisolvency_check, Verdict};
use srk::exact::{int, nullspace, rat, solve, RatMatrix};
use srk::extend::{check_a1, check_a2, restriction_onto, verify_witness, witness_k_rd, witness_rd_rs};
use srk::simplicial::{builtin_mesh, MeshName, MeshPair, Simplex, SimplexGeometry, Triangulation};
use srk::spaces::{
    assemble_space, constraint_rows, fe_extend, restrict_vector, satisfies, spaces_equal, SpaceKind,
};
use srk::{ContinuityVector, Rational};

type Outcome = Result<String, String>;

fn cv(s: &str) -> ContinuityVector {
    s.parse().unwrap()
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e2s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Counts DOFs by summing, over faces, normal-derivative multiplicities times
/// bubble sizes, with the bubble enumerated by brute force.
fn brute_force_dof_count(d: usize, r: &[usize], k: usize) -> usize {
    let rr = |s: usize| if s == 0 { 0 } else { r[s - 1] };
    let mut total = 0;
    for s in 0..=d {
        let faces = binomial(d + 1, d - s + 1);
        for n in 0..=rr(s) {
            let thetas = if s == 0 { usize::from(n == 0) } else { binomial(n + s - 1, s - 1) };
            let bubble = if s == d {
                1
            } else if k < n {
                0
            } else {
                let len = d - s + 1;
                let mut count = 0;
                let mut sigma = vec![0; len];
                compositions(len, k - n, &mut sigma, 0, &mut |sigma| {
                    let ok = (1u32..(1 << len) - 1).all(|mask| {
                        let sz = mask.count_ones() as usize;
                        let sum: i64 = (0..len).filter(|i| mask >> i & 1 == 1).map(|i| sigma[i] as i64).sum();
                        sum > rr(sz + s) as i64 - n as i64
                    });
                    if ok {
                        count += 1;
                    }
                });
                count
            };
            total += faces * thetas * bubble;
        }
    }
    total
}

fn compositions(len: usize, left: usize, sigma: &mut Vec<usize>, at: usize, f: &mut dyn FnMut(&[usize])) {
    if at == len - 1 {
        sigma[at] = left;
        f(sigma);
        return;
    }
    for v in 0..=left {
        sigma[at] = v;
        compositions(len, left - v, sigma, at + 1, f);
    }
}

fn criterion_1() -> Outcome {
    let cases: [(usize, &str, usize, usize, Duration); 4] = [
        (1, "1", 3, 4, Duration::from_secs(1)),
        (2, "1,2", 5, 21, Duration::from_secs(1)),
        (2, "2,4", 9, 55, Duration::from_secs(1)),
        (3, "1,2,4", 9, 220, Duration::from_secs(60)),
    ];
    let mut out = Vec::new();
    for (d, r, k, expected, budget) in cases {
        let t = Instant::now();
        let rep = unisolvency_check(d, &cv(r), k).map_err(e2s)?;
        let el = t.elapsed();
        ensure(rep.verdict == Verdict::Unisolvent, format!("d={d} r=({r}) k={k}: {:?}", rep.verdict))?;
        ensure(
            rep.dof_count == expected && rep.rank == expected && rep.dim_pk == expected,
            format!("d={d}: count {} rank {} dim {}", rep.dof_count, rep.rank, rep.dim_pk),
        )?;
        ensure(binomial(k + d, d) == expected, "C(k+d,d) disagrees")?;
        if d < 3 {
            let bf = brute_force_dof_count(d, cv(r).as_slice(), k);
            ensure(bf == expected, format!("brute-force count {bf} for d={d}"))?;
        }
        ensure(el <= budget, format!("d={d} took {el:?}"))?;
        out.push(format!("{expected} in {el:.2?}"));
    }
    Ok(out.join(", "))
}

fn criterion_2() -> Outcome {
    let rep = unisolvency_check(2, &cv("1,1"), 5).map_err(e2s)?;
    let bf = brute_force_dof_count(2, &[1, 1], 5);
    ensure(rep.verdict == Verdict::CountMismatch, format!("{:?}", rep.verdict))?;
    ensure(rep.dof_count == 24 && rep.dim_pk == 21 && bf == 24, format!("count {} dim {}", rep.dof_count, rep.dim_pk))?;
    Ok("count_mismatch(24, 21)".into())
}

fn check_equal(tri: Triangulation, r: &str, k: usize, expected: Option<usize>) -> Result<String, String> {
    let t = Instant::now();
    let tri = Arc::new(tri);
    let e = assemble_space(tri.clone(), SpaceKind::Fe, &cv(r), k).map_err(e2s)?;
    let s = assemble_space(tri, SpaceKind::Superspline, &cv(r), k).map_err(e2s)?;
    ensure(e.dim() == s.dim(), format!("dims {} vs {}", e.dim(), s.dim()))?;
    if let Some(x) = expected {
        ensure(e.dim() == x, format!("dim {} expected {x}", e.dim()))?;
    }
    ensure(spaces_equal(&e, &s).map_err(e2s)?, "spans differ")?;
    Ok(format!("dim {} ({} unknowns) in {:.2?}", e.dim(), e.stats().n_unknowns, t.elapsed()))
}

fn pts(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
    rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
}

fn criterion_3() -> Outcome {
    let chain = Triangulation::new(1, pts(&[&[0], &[1], &[2]]), vec![vec![0, 1], vec![1, 2]]).map_err(e2s)?;
    let a = check_equal(chain, "1", 3, Some(6))?;
    let qua = builtin_mesh(MeshName::Qua, 2).map_err(e2s)?.full;
    let b = check_equal(qua, "1,2", 5, Some(38))?;
    let tets = Triangulation::new(
        3,
        pts(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1]]),
        vec![vec![0, 1, 2, 3], vec![1, 2, 3, 4]],
    )
    .map_err(e2s)?;
    let c = check_equal(tets, "1,2,4", 9, None)?;
    Ok(format!("chain {a}; qua(2) {b}; two tets {c}"))
}

fn catalog_pairs(d: usize) -> Vec<(String, MeshPair)> {
    MeshName::ALL
        .iter()
        .filter(|n| n.fixed_dim().map_or(true, |f| f == d))
        .map(|&n| (format!("{n}({d})"), builtin_mesh(n, d).unwrap()))
        .collect()
}

fn random_combination(rng: &mut ChaCha8Rng, basis: &[Vec<Rational>], len: usize) -> Vec<Rational> {
    let mut u = vec![Rational::zero(); len];
    for b in basis {
        let c = int(rng.gen_range(-3..=3));
        if c.is_zero() {
            continue;
        }
        for (x, y) in u.iter_mut().zip(b) {
            *x += &c * y;
        }
    }
    u
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut checked = 0;
    for (d, params) in [(1, vec![("0", 1), ("1", 3)]), (2, vec![("1,2", 5)])] {
        for (name, pair) in catalog_pairs(d) {
            let tri = Arc::new(pair.full);
            let sub = Arc::new(pair.sub);
            for &(r, k) in &params {
                let r = cv(r);
                let v = restriction_onto(tri.clone(), sub.clone(), &r, k, SpaceKind::Fe).map_err(e2s)?;
                ensure(v.onto, format!("{name} r=({r}) k={k} not onto"))?;
                let on_sub = assemble_space(sub.clone(), SpaceKind::Fe, &r, k).map_err(e2s)?;
                let rows = constraint_rows(&tri, SpaceKind::Fe, &r, k).map_err(e2s)?;
                let positions = tri.cell_positions_of(&sub).map_err(e2s)?;
                let block = dim_pk(d, k);
                for _ in 0..20 {
                    let u = random_combination(&mut rng, on_sub.basis(), block * sub.num_cells());
                    let ext = fe_extend(&u, &sub, &tri, &r, k).map_err(e2s)?;
                    ensure(restrict_vector(block, &ext, &positions) == u, format!("{name}: restriction differs"))?;
                    ensure(satisfies(&rows, &ext), format!("{name}: extension not in E(T)"))?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} extensions"))
}

fn onto(name: MeshName, d: usize, r: &str, k: usize) -> Result<bool, String> {
    let pair = builtin_mesh(name, d).map_err(e2s)?;
    let v = restriction_onto(Arc::new(pair.full), Arc::new(pair.sub), &cv(r), k, SpaceKind::Superspline)
        .map_err(e2s)?;
    Ok(v.onto)
}

fn criterion_5() -> Outcome {
    let expect = [
        (MeshName::Intervals3, 1, "0", 0, false),
        (MeshName::Intervals3, 1, "1", 2, false),
        (MeshName::Intervals3, 1, "0", 1, true),
        (MeshName::Intervals3, 1, "1", 3, true),
        (MeshName::SingularVertex2d, 2, "1,1", 5, false),
        (MeshName::SingularVertex2d, 2, "1,2", 5, true),
    ];
    for (name, d, r, k, want) in expect {
        let t = Instant::now();
        let got = onto(name, d, r, k)?;
        ensure(got == want, format!("{name} r=({r}) k={k}: onto = {got}"))?;
        ensure(t.elapsed() < Duration::from_secs(5), format!("{name} r=({r}) k={k} too slow"))?;
    }
    // u = 0 on K_++, u = x_1 x_2 on K_--.
    let pair = builtin_mesh(MeshName::SingularVertex2d, 2).map_err(e2s)?;
    let k_mm = Simplex::new(vec![0, 2, 4]).map_err(e2s)?;
    let mut polys = Vec::new();
    for cell in pair.sub.cells() {
        let g = pair.sub.geometry(cell).map_err(e2s)?;
        polys.push(if *cell == k_mm {
            let p = BBPoly::coordinate(g.clone(), 0).multiply(&BBPoly::coordinate(g, 1)).map_err(e2s)?;
            p.degree_elevate(3)
        } else {
            BBPoly::zero(g, 5)
        });
    }
    let u = srk::spaces::global_vector(&polys);
    let rep = verify_witness(&pair.full, &pair.sub, &cv("1,1"), 5, SpaceKind::Superspline, &u).map_err(e2s)?;
    ensure(rep.member_of_sub && !rep.extendable, format!("paper witness gave {rep:?}"))?;
    Ok("6 verdicts and the (0, x1 x2) witness".into())
}

fn criterion_6() -> Outcome {
    let mut out = Vec::new();
    let cases: Vec<(&str, Box<dyn Fn() -> srk::Result<srk::extend::Witness>>)> = vec![
        ("k_rd d=1 (1) k=2", Box::new(|| witness_k_rd(1, &cv("1"), 2))),
        ("k_rd d=2 (1,2) k=4", Box::new(|| witness_k_rd(2, &cv("1,2"), 4))),
        ("rs d=2 s=2 (1,1) k=5", Box::new(|| witness_rd_rs(2, 2, &cv("1,1"), 5))),
        ("rs d=3 s=3 (1,2,3) k=7", Box::new(|| witness_rd_rs(3, 3, &cv("1,2,3"), 7))),
        ("rs d=3 s=2 (1,1,2) k=5", Box::new(|| witness_rd_rs(3, 2, &cv("1,1,2"), 5))),
    ];
    for (label, build) in cases {
        let t = Instant::now();
        let w = build().map_err(e2s)?;
        ensure(w.polys.iter().any(|p| !p.is_zero()), format!("{label}: zero witness"))?;
        let rep = verify_witness(&w.pair.full, &w.pair.sub, &w.r, w.k, SpaceKind::Superspline, &w.coefficients())
            .map_err(e2s)?;
        ensure(rep.member_of_sub && !rep.extendable, format!("{label}: {rep:?}"))?;
        out.push(format!("{label} {:.2?}", t.elapsed()));
    }
    Ok(out.join(", "))
}

fn random_r(rng: &mut ChaCha8Rng, d: usize, max: usize) -> ContinuityVector {
    let mut v: Vec<usize> = (0..d).map(|_| rng.gen_range(0..=max)).collect();
    v.sort_unstable();
    ContinuityVector::new(v).unwrap()
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut done = 0;
    while done < 200 {
        let d = rng.gen_range(1..=3);
        let r = random_r(&mut rng, d, 4);
        let k = rng.gen_range(0..=9);
        let s = rng.gen_range(0..d);
        let n = rng.gen_range(0..=r.r(s).min(k));
        let t = rng.gen_range(s..=d);
        let q_top = if t == s { 0 } else { r.r(t) - n };
        let n2 = rng.gen_range(0..=q_top);
        let ok = check_bubble_shift(d, s, t, &r, k, n, n2).map_err(e2s)?;
        ensure(ok, format!("d={d} s={s} t={t} r=({r}) k={k} n={n} n2={n2}"))?;
        done += 1;
    }
    Ok(format!("{done} tuples"))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for case in 0..100 {
        let d = rng.gen_range(1..=2);
        let k = rng.gen_range(1..=6);
        let r = rng.gen_range(0..=2.min(k));
        let vertex = rng.gen_range(0..=d);
        let geom = Arc::new(SimplexGeometry::reference(d));
        let n = dim_pk(d, k);
        // Rows: p ↦ ∂^β p(V) for all Cartesian β with |β| ≤ r.
        let mut rows = Vec::new();
        for order in 0..=r {
            for beta in multi_indices(d, order) {
                let mut l = LinearFunctional::vertex_value(geom.clone(), k - order, vertex);
                for (c, &b) in beta.iter().enumerate() {
                    let e: Vec<Rational> = (0..d).map(|j| if j == c { Rational::one() } else { Rational::zero() }).collect();
                    for _ in 0..b {
                        l = l.pullback_derivative(&e);
                    }
                }
                rows.push(l.into_weights());
            }
        }
        let null = nullspace(&RatMatrix::from_rows(n, rows).map_err(e2s)?);
        let p: Vec<Rational> = (0..n).map(|_| rat(rng.gen_range(-9..=9), rng.gen_range(1..=4))).collect();
        // Orthogonal projection onto span(null) in the coefficient inner product.
        let projected = if null.is_empty() {
            vec![Rational::zero(); n]
        } else {
            let m = null.len();
            let gram: Vec<Vec<Rational>> = (0..m)
                .map(|i| (0..m).map(|j| srk::exact::dot(&null[i], &null[j])).collect())
                .collect();
            let rhs: Vec<Rational> = null.iter().map(|b| srk::exact::dot(b, &p)).collect();
            let c = solve(&RatMatrix::from_rows(m, gram).map_err(e2s)?, &rhs)
                .map_err(e2s)?
                .ok_or("singular Gram matrix")?;
            (0..n)
                .map(|i| null.iter().zip(&c).map(|(b, ci)| &b[i] * ci).sum())
                .collect()
        };
        let poly = BBPoly::from_coeffs(geom, k, projected).map_err(e2s)?;
        for (alpha, c) in multi_indices(d + 1, k).iter().zip(poly.coeffs()) {
            if alpha[vertex] + r >= k {
                ensure(c.is_zero(), format!("case {case}: d={d} k={k} r={r} α={alpha:?} coefficient {c}"))?;
            }
        }
        ensure(poly.vanishing_order_at_vertex(vertex, r), format!("case {case}: vanishing order"))?;
    }
    Ok("100 projections".into())
}

fn criterion_9() -> Outcome {
    let mut count = 0;
    for d in 1..=4usize {
        let mut r = vec![0usize; d];
        loop {
            let rv = ContinuityVector::new(r.clone()).unwrap();
            // The chain r_d ≥ 2 r_{d-1} ≥ 4 r_{d-2} ≥ … ≥ 2^{d-1} r_1 read literally.
            let chain: Vec<u64> = (1..=d).rev().map(|j| (1u64 << (d - j)) * r[j - 1] as u64).collect();
            let a2 = chain.windows(2).all(|w| w[0] >= w[1]);
            ensure(check_a2(&rv) == a2, format!("A2 on {r:?}"))?;
            for k in 0..=20 {
                let a1 = k >= 2 * r[d - 1] + 1 && a2;
                ensure(check_a1(&rv, k) == a1, format!("A1 on {r:?}, k={k}"))?;
                count += 1;
            }
            // Next non-decreasing vector with entries ≤ 8.
            let Some(i) = (0..d).rev().find(|&i| r[i] < 8) else { break };
            let v = r[i] + 1;
            for x in &mut r[i..] {
                *x = v;
            }
        }
    }
    Ok(format!("{count} (r, k) pairs"))
}

type Poly = BTreeMap<Vec<usize>, Rational>;

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<usize> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert_with(Rational::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `∫_{unit simplex} x^a dx` by integrating out the last variable repeatedly.
fn iterated_integral(a: &[usize]) -> Rational {
    let m = a.len();
    let mut p: Poly = [(a.to_vec(), Rational::one())].into();
    for var in (0..m).rev() {
        // Upper limit 1 - Σ_{j<var} x_j.
        let mut upper: Poly = [(vec![0; m], Rational::one())].into();
        for j in 0..var {
            let mut e = vec![0; m];
            e[j] = 1;
            upper.insert(e, -Rational::one());
        }
        let mut next = Poly::new();
        for (e, c) in &p {
            let pw = e[var] + 1;
            let mut base = e.clone();
            base[var] = 0;
            let mut term: Poly = [(base, c / int(pw as i64))].into();
            for _ in 0..pw {
                term = poly_mul(&term, &upper);
            }
            for (e2, c2) in term {
                *next.entry(e2).or_insert_with(Rational::zero) += c2;
            }
        }
        next.retain(|_, c| !c.is_zero());
        p = next;
    }
    p.get(&vec![0; m]).cloned().unwrap_or_else(Rational::zero)
}

fn monomial_bb(geom: &Arc<SimplexGeometry>, a: &[usize]) -> BBPoly {
    let mut p = BBPoly::one(geom.clone());
    for (c, &e) in a.iter().enumerate() {
        p = p.multiply(&BBPoly::coordinate(geom.clone(), c).pow(e)).unwrap();
    }
    p
}

fn poly_eval(p: &Poly, x: &[Rational]) -> Rational {
    p.iter()
        .map(|(e, c)| e.iter().zip(x).fold(c.clone(), |acc, (&k, xi)| acc * num_traits::pow(xi.clone(), k)))
        .sum()
}

fn poly_directional(p: &Poly, v: &[Rational]) -> Poly {
    let mut out = Poly::new();
    for (e, c) in p {
        for (j, vj) in v.iter().enumerate() {
            if e[j] == 0 || vj.is_zero() {
                continue;
            }
            let mut e2 = e.clone();
            e2[j] -= 1;
            *out.entry(e2).or_insert_with(Rational::zero) += c * vj * int(e[j] as i64);
        }
    }
    out
}

fn criterion_10() -> Outcome {
    let mut monomials = 0;
    for m in 1..=3 {
        let geom = Arc::new(SimplexGeometry::reference(m));
        let vol_inv = (1..=m as i64).fold(Rational::one(), |acc, i| acc * int(i));
        for deg in 0..=6 {
            for a in multi_indices(m, deg) {
                let expected = iterated_integral(&a) * &vol_inv;
                let got = monomial_bb(&geom, &a).integrate_normalized();
                ensure(got == expected, format!("∫ x^{a:?} over unit simplex of dim {m}: {got} vs {expected}"))?;
                monomials += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut cases = 0;
    for d in 1..=3usize {
        let skew: Vec<Vec<Rational>> = (0..=d)
            .map(|i| (0..d).map(|j| if i == j + 1 { int(2) } else if i > 0 { rat(1, 3) } else { int(-1) }).collect())
            .collect();
        let geoms = [
            Arc::new(SimplexGeometry::reference(d)),
            Arc::new(SimplexGeometry::new(Simplex::new((0..=d).collect()).unwrap(), skew).map_err(e2s)?),
        ];
        for geom in &geoms {
            for _ in 0..5 {
                let k = rng.gen_range(1..=4);
                let mut p = Poly::new();
                let mut bb = BBPoly::zero(geom.clone(), k);
                for deg in 0..=k {
                    for a in multi_indices(d, deg) {
                        let c = rat(rng.gen_range(-5..=5), rng.gen_range(1..=3));
                        if c.is_zero() {
                            continue;
                        }
                        bb = bb.add(&monomial_bb(geom, &a).scale(&c).degree_elevate(k - deg)).map_err(e2s)?;
                        p.insert(a, c);
                    }
                }
                let v: Vec<Rational> = (0..d).map(|_| rat(rng.gen_range(-4..=4), rng.gen_range(1..=3))).collect();
                let dp = poly_directional(&p, &v);
                let dbb = bb.directional_derivative(&v);
                for _ in 0..10 {
                    let x: Vec<Rational> = (0..d).map(|_| rat(rng.gen_range(-7..=7), rng.gen_range(1..=5))).collect();
                    ensure(poly_eval(&p, &x) == bb.evaluate(&x), "conversion to BB form disagrees")?;
                    ensure(poly_eval(&dp, &x) == dbb.evaluate(&x), format!("derivative disagrees at {x:?}"))?;
                }
                cases += 1;
            }
        }
    }
    Ok(format!("{monomials} monomials, {cases} derivative cases"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("unisolvency suite", criterion_1),
        ("negative unisolvency", criterion_2),
        ("finite element space equals superspline space", criterion_3),
        ("finite element extendability", criterion_4),
        ("extendability counterexamples", criterion_5),
        ("necessity witnesses", criterion_6),
        ("bubble shift identity", criterion_7),
        ("vanishing coefficients at a vertex", criterion_8),
        ("assumption oracles", criterion_9),
        ("integration and derivative oracles", criterion_10),
    ];
    let only: Option<usize> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let n = i + 1;
        if only.is_some_and(|o| o != n) {
            continue;
        }
        let t = Instant::now();
        let res = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match res {
            Ok(detail) => println!("criterion {n:>2} PASS  {name}: {detail} [{:.2?}]", t.elapsed()),
            Err(why) => {
                failed += 1;
                println!("criterion {n:>2} FAIL  {name}: {why} [{:.2?}]", t.elapsed());
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
