use qlss::circuits::{assemble_circuit, circuit_error, unitarity_error, CircuitInputs, CircuitKind};
use qlss::instance::random_instance_with;
use qlss::systems::{augment, build_g_t, homotopy_point};
use qlss::{random_instance, InstanceSpec};

fn inputs_for(inst: &qlss::LinearSystemInstance, s: usize) -> CircuitInputs {
    let mut i = CircuitInputs::from_system(inst.a(), inst.b(), s).unwrap();
    i.t = Some(inst.kappa().min(2.0));
    i.f = Some(0.6);
    i
}

#[test]
fn every_kind_matches_target_on_random_systems() {
    for seed in 0..8 {
        let inst = random_instance(2 + (seed as usize % 2), 6.0, None, seed).unwrap();
        let inputs = inputs_for(&inst, 2);
        for kind in CircuitKind::ALL {
            let err = circuit_error(kind, inst.a(), inst.b(), &inputs).unwrap();
            assert!(err <= 1e-10, "{} error {err}", kind.name());
        }
    }
}

#[test]
fn assembled_circuits_are_unitary() {
    let inst = random_instance(3, 4.0, None, 1).unwrap();
    let inputs = inputs_for(&inst, 2);
    for kind in CircuitKind::ALL {
        let c = assemble_circuit(kind, &inputs).unwrap();
        assert!(unitarity_error(&c.circuit).unwrap() < 1e-12);
    }
}

#[test]
fn rectangular_rank_deficient_system() {
    let spec = InstanceSpec { rows: 3, cols: 2, rank: 2, kappa: 5.0, norm_target: None };
    let inst = random_instance_with(&spec, 4).unwrap();
    let inputs = inputs_for(&inst, 2);
    for kind in CircuitKind::ALL {
        assert!(circuit_error(kind, inst.a(), inst.b(), &inputs).unwrap() <= 1e-10);
    }
}

#[test]
fn augmented_reflection_block_matches_system_builder() {
    let inst = random_instance(3, 8.0, None, 5).unwrap();
    let mut inputs = CircuitInputs::from_system(inst.a(), inst.b(), 2).unwrap();
    inputs.t = Some(3.0);
    let g = build_g_t(&augment(&inst, 3.0).unwrap());
    let enc = assemble_circuit(CircuitKind::UGt, &inputs).unwrap();
    let be = enc.block_encoding().unwrap();
    for i in 0..4 {
        for j in 0..4 {
            assert!((be.encoded[(i, j)] - g[(i, j)]).norm() < 1e-10);
        }
    }
}

#[test]
fn homotopy_block_matches_system_builder() {
    let inst = random_instance(2, 8.0, None, 6).unwrap();
    for sigma in [0.3, 0.7, 1.0] {
        let p = homotopy_point(&inst, sigma, None).unwrap();
        let mut inputs = CircuitInputs::from_system(inst.a(), inst.b(), 2).unwrap();
        inputs.f = Some(p.f_value);
        let enc = assemble_circuit(CircuitKind::UBarASigma, &inputs).unwrap();
        let be = enc.block_encoding().unwrap();
        let target = qlss::circuits::embed_homotopy(&p.a_bar, 2, 2);
        assert!(qlss::linalg::max_abs_diff(&be.encoded, &target) < 1e-10);
    }
}

#[test]
fn unit_corner_when_estimate_is_one() {
    let inst = random_instance(2, 4.0, None, 2).unwrap();
    let mut inputs = CircuitInputs::from_system(inst.a(), inst.b(), 2).unwrap();
    inputs.t = Some(1.0);
    let be = assemble_circuit(CircuitKind::UAt, &inputs).unwrap().block_encoding().unwrap();
    assert!((be.encoded[(2, 2)].re - 1.0).abs() < 1e-12);
}

#[test]
fn oracle_counts_of_reflection_block() {
    let inst = random_instance(2, 4.0, None, 2).unwrap();
    let inputs = inputs_for(&inst, 2);
    let c = assemble_circuit(CircuitKind::UGt, &inputs).unwrap();
    let q = c.circuit.oracle_counts();
    assert_eq!(q.c_u_a + q.u_a, 1);
    assert_eq!(q.combined_b(), 2);
}

#[test]
fn missing_parameter_is_reported() {
    let inst = random_instance(2, 4.0, None, 2).unwrap();
    let inputs = CircuitInputs::from_system(inst.a(), inst.b(), 2).unwrap();
    assert_eq!(assemble_circuit(CircuitKind::UAt, &inputs).unwrap_err().code(), "invalid_params");
    let full = CircuitInputs::from_system(inst.a(), inst.b(), 1).unwrap();
    assert_eq!(assemble_circuit(CircuitKind::UGt, &full).unwrap_err().code(), "shape_mismatch");
}
