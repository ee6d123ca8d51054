use metadist::parallel::par_nested_md_estimate;
use metadist_core::canonical::{CanonicalModel, CanonicalParams, InterfererMode, QosSpec};
use metadist_core::mdcore::{nested_md_estimate, InnerLayer, MdQuery};
use metadist_core::thz::{AbsorptionTable, ThzModel, ThzParams};

#[test]
fn canonical_parallel_equals_sequential() {
    for mode in [InterfererMode::Single, InterfererMode::Multi] {
        let params = CanonicalParams::new(1e-4, 3.5, 0.5, QosSpec::Direct(1.0), mode).unwrap();
        let model = CanonicalModel::second_order(params);
        let q = MdQuery::new(1.0, vec![0.8, 0.3], vec![50, 20, 300]).unwrap();
        assert_eq!(
            par_nested_md_estimate(&model, &q, 11).unwrap(),
            nested_md_estimate(&model, &q, 11).unwrap()
        );
    }
}

#[test]
fn thz_parallel_equals_sequential() {
    let params = ThzParams::normalized_check();
    let table = AbsorptionTable::synthetic_valley();
    let model = ThzModel::new(&params, &table).unwrap();
    let q = MdQuery::new(1.0, vec![0.5, 0.5], vec![1, 50, 400])
        .unwrap()
        .with_inner(InnerLayer::Analytic);
    assert_eq!(
        par_nested_md_estimate(&model, &q, 3).unwrap(),
        nested_md_estimate(&model, &q, 3).unwrap()
    );
}

#[test]
fn thread_count_does_not_matter() {
    let params = CanonicalParams::new(1e-4, 3.5, 0.2, QosSpec::Direct(1.0), InterfererMode::Single).unwrap();
    let model = CanonicalModel::second_order(params);
    let q = MdQuery::new(1.0, vec![0.8, 0.5], vec![30, 20, 200]).unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| par_nested_md_estimate(&model, &q, 5).unwrap())
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn arity_checked_before_running() {
    let params = CanonicalParams::new(1e-4, 3.5, 0.2, QosSpec::Direct(1.0), InterfererMode::Single).unwrap();
    let q = MdQuery::new(1.0, vec![0.8], vec![30, 20]).unwrap();
    assert!(par_nested_md_estimate(&CanonicalModel::second_order(params), &q, 5).is_err());
}
