//! Engine and bracket outputs against values computed independently:
//! published homology tables, closed formulas evaluated in floating point,
//! and the skein-free count of Jones polynomials.

use khtail_core::algebra::{LaurentPoly, LaurentRational, RingKind};
use khtail_core::engine::{khovanov, Method};
use khtail_core::tangle::io::parse;
use khtail_core::tangle::{ColoredLink, LinkDiagram, SpinNetwork};
use khtail_core::tl::{bracket, colored_jones, jones_wenzl, spin_network_eval, trace, SlotFill};

fn diagram(text: &str) -> LinkDiagram {
    LinkDiagram::new(parse(text).unwrap()).unwrap()
}

fn eval_poly(p: &LaurentPoly, q: f64) -> f64 {
    p.terms().map(|(e, c)| c.to_string().parse::<f64>().unwrap() * q.powi(e)).sum()
}

fn eval(r: &LaurentRational, q: f64) -> f64 {
    eval_poly(r.num(), q) / eval_poly(r.den(), q)
}

fn qint(n: i32, q: f64) -> f64 {
    (q.powi(n) - q.powi(-n)) / (q - 1.0 / q)
}

fn qfact(n: i32, q: f64) -> f64 {
    (1..=n).map(|k| qint(k, q)).product()
}

/// Theta network with internal strand counts `x = (a + b - c) / 2` and so on.
fn theta_oracle(a: i32, b: i32, c: i32, q: f64) -> f64 {
    let (x, y, z) = ((a + b - c) / 2, (a + c - b) / 2, (b + c - a) / 2);
    qfact(x + y + z + 1, q) * qfact(x, q) * qfact(y, q) * qfact(z, q)
        / (qfact(x + y, q) * qfact(y + z, q) * qfact(x + z, q))
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()))
}

const SAMPLES: [f64; 3] = [1.3, 0.7, 2.1];

#[test]
fn circles_and_thetas_match_the_factorial_formula() {
    for n in 1..=5 {
        let v = spin_network_eval(&SpinNetwork::circle(n).unwrap()).unwrap();
        for q in SAMPLES {
            assert!(close(eval(&v, q), qint(n as i32 + 1, q)), "circle {n}");
        }
    }
    for (a, b, c) in [(1, 1, 2), (2, 2, 2), (2, 3, 3), (3, 3, 2), (2, 2, 4)] {
        let v = spin_network_eval(&SpinNetwork::theta(a, b, c).unwrap()).unwrap();
        for q in SAMPLES {
            let (got, want) = (eval(&v, q), theta_oracle(a as i32, b as i32, c as i32, q));
            assert!(close(got, want), "theta({a},{b},{c}) at {q}: {got} vs {want}");
        }
    }
}

#[test]
fn projector_traces_and_first_coefficients() {
    for n in 1..=5 {
        let p = jones_wenzl(n).unwrap();
        let t = trace(&p);
        for q in SAMPLES {
            assert!(close(eval(&t, q), qint(n as i32 + 1, q)));
        }
    }
    // P_2 = 1 - e_1 / [2]; e_1 pairs bottom points 0, 1 and top points 2, 3.
    let p = jones_wenzl(2).unwrap();
    assert!(p.identity_coeff().is_one());
    for q in SAMPLES {
        assert!(close(eval(&p.coeff(&[1, 0, 3, 2]), q), -1.0 / qint(2, q)));
    }
}

#[test]
fn jones_polynomials_from_tables() {
    // Unnormalized, in the variable where the unknot is q + q^-1:
    // (q + q^-1) V(t = q^2) up to the mirror convention.
    let cases = [
        ("cup 0\ncap 0\n", vec![(-1, 1), (1, 1)]),
        ("B2:1,1", vec![(0, 1), (2, 1), (4, 1), (6, 1)]),
        ("B2:1,1,1", vec![(1, 1), (3, 1), (5, 1), (9, -1)]),
        ("B2:-1,-1,-1", vec![(-1, 1), (-3, 1), (-5, 1), (-9, -1)]),
        ("B3:1,-2,1,-2", vec![(-5, 1), (5, 1)]),
    ];
    for (text, terms) in cases {
        let b = bracket(&diagram(text), SlotFill::Identity).unwrap().as_poly().unwrap();
        let mut got: Vec<(i32, i64)> = b.terms().map(|(e, c)| (e, c.to_string().parse().unwrap())).collect();
        got.sort();
        let mut want = terms.clone();
        want.sort();
        assert_eq!(got, want, "{text}");
    }
}

#[test]
fn colored_unknot_is_a_quantum_integer() {
    let u = diagram("cup 0\ncap 0\n");
    for n in 1..=4 {
        let v = colored_jones(&ColoredLink::uniform(u.clone(), n).unwrap()).unwrap();
        for q in SAMPLES {
            assert!(close(eval(&v, q), qint(n as i32 + 1, q)));
        }
    }
}

/// `(i, j, rank, torsion)` of every nonzero group.
fn table(text: &str, ring: RingKind) -> Vec<(i64, i64, usize, Vec<String>)> {
    let t = khovanov(&diagram(text), ring, Method::Scan, None).unwrap().normalized();
    t.groups.iter().map(|g| (g.i, g.j, g.rank, g.torsion.iter().map(|x| x.to_string()).collect())).collect()
}

#[test]
fn khovanov_tables_of_small_knots() {
    let none = Vec::<String>::new;
    let two = || vec!["2".to_string()];
    // Right-handed trefoil.
    let mut t = table("B2:1,1,1", RingKind::Z);
    t.sort();
    assert_eq!(t, vec![(0, 1, 1, none()), (0, 3, 1, none()), (2, 5, 1, none()), (3, 7, 0, two()), (3, 9, 1, none())]);
    // Figure-eight.
    let mut t = table("B3:1,-2,1,-2", RingKind::Z);
    t.sort();
    assert_eq!(
        t,
        vec![
            (-2, -5, 1, none()),
            (-1, -3, 0, two()),
            (-1, -1, 1, none()),
            (0, -1, 1, none()),
            (0, 1, 1, none()),
            (1, 1, 1, none()),
            (2, 3, 0, two()),
            (2, 5, 1, none()),
        ]
    );
    // Over F2 each Z/2 adds a rank in two adjacent degrees.
    let f2: usize = table("B3:1,-2,1,-2", RingKind::F2).iter().map(|g| g.2).sum();
    assert_eq!(f2, 10);
}

#[test]
fn scan_and_cube_agree_on_a_five_crossing_knot() {
    let d = diagram("B2:1,1,1,1,1");
    let a = khovanov(&d, RingKind::Z, Method::Scan, None).unwrap();
    let b = khovanov(&d, RingKind::Z, Method::Raw, None).unwrap();
    assert_eq!(a.groups, b.groups);
    let f = khovanov(&d, RingKind::F2, Method::Scan, Some(&[7, 9])).unwrap();
    assert!(f.groups.iter().all(|g| g.j == 7 || g.j == 9));
}
