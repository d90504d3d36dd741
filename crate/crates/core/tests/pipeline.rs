use qubopress::generators::{gen_subsetsum, subsetsum_to_qubo};
use qubopress::io::{read_qubo, write_qubo};
use qubopress::{compress, optimum_included, BoundMethod, CompressionConfig, HeuristicChoice, QuboInstance, Selection};

#[test]
fn readme_example() -> qubopress::Result<()> {
    let q = QuboInstance::from_dense(&[[-1.0, 0.4, 1.0], [0.0, 0.4, -0.8], [0.0, 0.0, -1.5]])?;
    let cfg = CompressionConfig { heuristic: HeuristicChoice::M, max_iterations: 50, ..Default::default() };
    let (small, trace) = compress(&q, &cfg)?;
    assert!(trace.final_dr <= trace.initial_dr);
    assert!(optimum_included(&small, &q)?);
    Ok(())
}

#[test]
fn compressed_subsetsum_survives_a_file_round_trip() -> qubopress::Result<()> {
    let p = gen_subsetsum(12, 20)?;
    let q = subsetsum_to_qubo(&p)?;
    let cfg = CompressionConfig {
        selection: Selection::GreedyImpact,
        bound_method: BoundMethod::HeuristicRoofDual,
        max_iterations: 60,
        ..Default::default()
    };
    let (small, trace) = compress(&q, &cfg)?;
    assert!(trace.records.windows(2).all(|w| w[1].dr_before <= w[0].dr_before));
    let dir = tempfile::tempdir().unwrap();
    for name in ["c.txt", "c.json"] {
        let path = dir.path().join(name);
        write_qubo(&small, &path)?;
        let back = read_qubo(&path)?;
        assert_eq!(back, small);
    }
    assert!(optimum_included(&small, &q)?);
    Ok(())
}
