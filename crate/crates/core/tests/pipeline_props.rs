use zeroone_crn::catalog;
use zeroone_crn::network::parse_network;
use zeroone_crn::pipeline::{parse_rational_list, run_pipeline, PipelineConfig, Stage};
use zeroone_crn::solver::solve_positive_steady_states;

fn fixtures_config() -> PipelineConfig {
    PipelineConfig {
        networks: vec![catalog::get("example5").unwrap().text.into(), catalog::get("example6").unwrap().text.into()],
        sample_count: 10,
        line_searches: 1,
        seed: 11,
        ..Default::default()
    }
}

fn sampled_config() -> PipelineConfig {
    PipelineConfig { species: 3, reactions: 4, subsample: Some(25), sample_count: 8, line_searches: 0, seed: 5, ..Default::default() }
}

fn rank(stage: Stage) -> usize {
    match stage {
        Stage::Multistable => 2,
        Stage::Multistationary => 1,
        _ => 0,
    }
}

#[test]
fn reports_do_not_depend_on_worker_count() {
    for cfg in [fixtures_config(), sampled_config()] {
        let one = run_pipeline(&PipelineConfig { workers: Some(1), ..cfg.clone() }).unwrap();
        let two = run_pipeline(&PipelineConfig { workers: Some(2), ..cfg.clone() }).unwrap();
        let again = run_pipeline(&PipelineConfig { workers: Some(1), ..cfg }).unwrap();
        assert_eq!(one, two);
        assert_eq!(one, again);
    }
}

#[test]
fn more_samples_never_lose_a_witness() {
    let base = PipelineConfig { use_witness_seeds: false, line_searches: 0, ..fixtures_config() };
    let few = run_pipeline(&PipelineConfig { sample_count: 3, ..base.clone() }).unwrap();
    let many = run_pipeline(&PipelineConfig { sample_count: 15, ..base }).unwrap();
    for (a, b) in few.records.iter().zip(&many.records) {
        assert!(rank(a.stage) <= rank(b.stage), "{}: {:?} then {:?}", a.network, a.stage, b.stage);
        let (na, nb) = (a.witness.as_ref().map_or(0, |w| w.nondegenerate), b.witness.as_ref().map_or(0, |w| w.nondegenerate));
        assert!(na <= nb);
    }
}

#[test]
fn witnesses_survive_an_independent_solve() {
    let mut reports = vec![run_pipeline(&fixtures_config()).unwrap(), run_pipeline(&sampled_config()).unwrap()];
    let fixtures = reports.remove(0);
    assert_eq!(fixtures.records[0].stage, Stage::Multistationary);
    assert_eq!(fixtures.records[1].stage, Stage::Multistable);
    for rec in fixtures.records.iter().chain(&reports[0].records) {
        let Some(w) = &rec.witness else { continue };
        assert!(rec.diagnostics.revalidated, "{}", rec.network);
        let net = parse_network(&rec.network.replace("; ", "\n")).unwrap();
        let kappa = parse_rational_list(&w.kappa.join(",")).unwrap();
        let c = if w.c.is_empty() { vec![] } else { parse_rational_list(&w.c.join(",")).unwrap() };
        let sols = solve_positive_steady_states(&net, &kappa, &c).unwrap();
        assert_eq!(sols.iter().filter(|s| s.nondegenerate).count(), w.nondegenerate, "{}", rec.network);
        assert_eq!(sols.len(), w.steady_states.len());
    }
}

#[test]
fn screened_networks_stay_monostationary() {
    let cfg = PipelineConfig { search_screened: true, ..sampled_config() };
    let report = run_pipeline(&cfg).unwrap();
    assert_eq!(report.summary.invariant_violations, 0);
    assert_eq!(report.summary.errors, 0);
    let screened = report
        .records
        .iter()
        .filter(|r| matches!(r.stage, Stage::ScreenedInjective | Stage::SignCertified))
        .count();
    assert!(screened > 0);
}
