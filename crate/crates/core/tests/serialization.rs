use kronecker_core::matching::{grading_c2, sagbi_pipeline, PipelineConfig, PipelineReport};
use kronecker_core::mirror::LaurentPolynomial;
use kronecker_core::tableaux::QuiverSpec;

#[test]
fn pipeline_report_round_trips_through_json() {
    let spec = QuiverSpec::new(3, 2, 3).unwrap();
    let report = sagbi_pipeline(&grading_c2(&spec).unwrap(), &PipelineConfig::default()).unwrap();
    let text = serde_json::to_string(&report).unwrap();
    let back: PipelineReport = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string(&back).unwrap(), text);
    assert_eq!(back.generators.len(), 20);
}

#[test]
fn laurent_polynomial_round_trips_through_json() {
    let f: LaurentPolynomial = "x1 + 3*x2/x1 + 12345678901234567890123/(x1^2*x2)".parse().unwrap();
    let text = serde_json::to_string(&f).unwrap();
    let back: LaurentPolynomial = serde_json::from_str(&text).unwrap();
    assert_eq!(back, f);
}
