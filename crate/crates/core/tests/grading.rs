use contest_core::contest::{majorizes, Contest};
use contest_core::distributions::Distribution;
use contest_core::grading::{
    enumerate_gradings, induced_prize_vector, optimize_grading, order_statistic_wages, refines, table1_row,
    GradingContest, HCase, SearchMode, WageSpec,
};
use contest_core::Error;

#[test]
fn square_law_ranking() {
    let c = Contest::new(Distribution::power(2.0).unwrap(), 3).unwrap();
    let r = optimize_grading(&c, &WageSpec::InverseProductivity, SearchMode::BruteForce).unwrap();
    let table: Vec<(String, f64)> = r.ranking.iter().map(|(g, e)| (g.to_string(), *e)).collect();
    assert_eq!(table[0].0, "1,2,3");
    assert!((table[0].1 - 17.6 / 15.0).abs() < 1e-9);
    // (1,3) and (2,3) tie at 0.96; the lexicographically smaller one ranks first
    assert_eq!(table[1].0, "1,3");
    assert_eq!(table[2].0, "2,3");
    assert!((table[1].1 - 0.96).abs() < 1e-9 && (table[2].1 - 0.96).abs() < 1e-9);
    assert_eq!(table[3].0, "3");
    assert!(table[3].1.abs() < 1e-12);
}

#[test]
fn structured_shapes() {
    let c = Contest::new(Distribution::reflected_power(0.5).unwrap(), 5).unwrap();
    let r = optimize_grading(&c, &WageSpec::Linear, SearchMode::Structured).unwrap();
    assert_eq!(r.best.cuts(), [1, 4, 5]);
    let c = Contest::new(Distribution::power(0.75).unwrap(), 5).unwrap();
    let r = optimize_grading(&c, &WageSpec::Linear, SearchMode::Structured).unwrap();
    assert!(HCase::DecreasingConvex.matches(&r.best), "{}", r.best);
    let brute = optimize_grading(&c, &WageSpec::Linear, SearchMode::BruteForce).unwrap();
    assert_eq!(brute.best, r.best);
}

#[test]
fn enumeration_counts_and_order() {
    for n in 2..=10 {
        assert_eq!(enumerate_gradings(n).unwrap().len(), 1 << (n - 1));
    }
    assert!(enumerate_gradings(1).is_err());
    let names: Vec<String> = enumerate_gradings(3).unwrap().iter().map(ToString::to_string).collect();
    assert_eq!(names, ["3", "1,3", "2,3", "1,2,3"]);
}

#[test]
fn refinement_and_mean_preservation() {
    let vstar = order_statistic_wages(&Distribution::power(2.0).unwrap(), &WageSpec::Linear, 6).unwrap();
    let mean = vstar.values().iter().sum::<f64>() / 6.0;
    let all = enumerate_gradings(6).unwrap();
    for g in &all {
        let v = induced_prize_vector(g, &vstar).unwrap();
        let m = v.values().iter().sum::<f64>() / 6.0;
        assert!((m - mean).abs() <= 4.0 * f64::EPSILON * mean, "{g}");
        for h in &all {
            if refines(g, h).unwrap() {
                assert!(majorizes(&v, &induced_prize_vector(h, &vstar).unwrap()).unwrap());
            }
        }
    }
    let fine = GradingContest::rank_revealing(6);
    assert!(all.iter().all(|h| refines(&fine, h).unwrap()));
}

#[test]
fn inverse_wage_needs_integrability() {
    let c = Contest::new(Distribution::power(0.75).unwrap(), 3).unwrap();
    let e = optimize_grading(&c, &WageSpec::InverseProductivity, SearchMode::BruteForce).unwrap_err();
    assert!(matches!(e, Error::Integrability { .. }), "{e:?}");
}

#[test]
fn tabulated_wage_matches_linear() {
    let w = WageSpec::from_table_text("theta\twage\n0\t1\n0.5\t0.5\n1\t0\n").unwrap();
    let d = Distribution::power(2.0).unwrap();
    let a = order_statistic_wages(&d, &w, 5).unwrap();
    let b = order_statistic_wages(&d, &WageSpec::Linear, 5).unwrap();
    for (x, y) in a.values().iter().zip(b.values()) {
        assert!((x - y).abs() < 1e-9);
    }
    assert!(WageSpec::from_table_text("theta\twage\n0\t0\n1\t1\n").is_err());
}

#[test]
fn table_rows_for_each_shape() {
    let rows = [
        (Distribution::power(2.0).unwrap(), HCase::IncreasingConcave),
        (Distribution::reflected_power(0.5).unwrap(), HCase::IncreasingConvex),
        (Distribution::reflected_power(2.0).unwrap(), HCase::DecreasingConcave),
        (Distribution::power(0.75).unwrap(), HCase::DecreasingConvex),
    ];
    for (d, case) in rows {
        for n in 3..=7 {
            let row = table1_row(&Contest::new(d.clone(), n).unwrap(), &WageSpec::Linear).unwrap();
            assert_eq!(row.case, Some(case));
            assert!(row.order_matches, "{} n={n}: {}", row.distribution, row.observed_order);
            assert_eq!(row.structure_matches, Some(true), "{} n={n}: {:?}", row.distribution, row.optimum);
        }
    }
}
