mod common;

use common::lp_vertex_oracle;
use dantzig_kit::lp::{self, LinearProgram, LpStatus};
use dantzig_kit::random::stream_rng;
use rand::Rng;

fn random_lp(index: u64) -> (Vec<f64>, Vec<Vec<f64>>, Vec<f64>) {
    let mut rng = stream_rng(99, 1, index);
    let n = rng.gen_range(1..=6);
    let m = rng.gen_range(1..=9);
    let c: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
    let mut a: Vec<Vec<f64>> = (0..m)
        .map(|_| (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect())
        .collect();
    let mut b: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..4.0)).collect();
    // A budget row keeps every instance bounded.
    a.push(vec![1.0; n]);
    b.push(10.0);
    (c, a, b)
}

#[test]
fn simplex_matches_vertex_enumeration() {
    let mut infeasible = 0;
    for k in 0..300 {
        let (c, a, b) = random_lp(k);
        let mut prog = LinearProgram::new(c.clone());
        for (row, &rhs) in a.iter().zip(&b) {
            prog.push_ub(row, rhs);
        }
        let sol = lp::solve(&prog).unwrap();
        match lp_vertex_oracle(&c, &a, &b) {
            Some((val, _)) => {
                assert_eq!(sol.status, LpStatus::Optimal, "instance {k}");
                assert!(
                    (sol.objective_value - val).abs() <= 1e-8 * val.abs().max(1.0),
                    "instance {k}"
                );
                assert!(prog.max_violation(&sol.x) <= 1e-9);
            }
            None => {
                infeasible += 1;
                assert_eq!(sol.status, LpStatus::Infeasible, "instance {k}");
            }
        }
    }
    // The generator should exercise both outcomes.
    assert!(infeasible > 0 && infeasible < 300);
}

#[test]
fn equality_rows_match_oracle_with_split_rows() {
    for k in 0..100 {
        let (c, mut a, mut b) = random_lp(1000 + k);
        let eq_row = a[0].clone();
        let eq_rhs = b[0];
        let mut prog = LinearProgram::new(c.clone());
        prog.push_eq(&eq_row, eq_rhs);
        for (row, &rhs) in a.iter().zip(&b).skip(1) {
            prog.push_ub(row, rhs);
        }
        a.push(eq_row.iter().map(|x| -x).collect());
        b.push(-eq_rhs);
        let sol = lp::solve(&prog).unwrap();
        match lp_vertex_oracle(&c, &a, &b) {
            Some((val, _)) => {
                assert_eq!(sol.status, LpStatus::Optimal, "instance {k}");
                assert!(
                    (sol.objective_value - val).abs() <= 1e-8 * val.abs().max(1.0),
                    "instance {k}"
                );
            }
            None => assert_eq!(sol.status, LpStatus::Infeasible, "instance {k}"),
        }
    }
}
