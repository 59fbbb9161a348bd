use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use std::hint::black_box;

use qccsd_bench::chain_fixture;
use qccsd_core::ansatz::{qccsd_circuit, uccsd_trotter_circuit, ParameterVector};
use qccsd_core::exact::{sector_ground_state, SectorBasis};
use qccsd_core::fermion::{build_hamiltonian, jordan_wigner, ActiveSpace};
use qccsd_core::integrals::{hydrogen_mo_integrals, sto3g_hydrogen_integrals, Geometry};
use qccsd_core::vqe::{minimize, AnsatzKind, MinimizeOptions, VqeProblem};
use qccsd_core::{Gate, StateVector};

fn bench_gates(c: &mut Criterion) {
    let fixture = chain_fixture(6); // 12 qubits
    let psi0 = StateVector::basis_state(12, fixture.reference).unwrap();
    c.bench_function("exchange_double_12q", |b| {
        b.iter_batched(
            || psi0.clone(),
            |mut psi| {
                psi.apply_gate(&Gate::ExchangeDouble {
                    qubits: [0, 4, 7, 10],
                    theta: 0.3,
                })
                .unwrap();
                black_box(psi)
            },
            BatchSize::SmallInput,
        )
    });

    let params: Vec<f64> = (0..fixture.excitations.parameter_count())
        .map(|i| 0.01 * (i as f64 + 1.0))
        .collect();
    let params = ParameterVector::new(params).unwrap();
    let qgates = qccsd_circuit(&fixture.excitations, &params).unwrap();
    c.bench_function("qccsd_circuit_h6", |b| {
        b.iter_batched(
            || psi0.clone(),
            |mut psi| {
                psi.run_circuit(&qgates).unwrap();
                black_box(psi)
            },
            BatchSize::SmallInput,
        )
    });

    let ugates = uccsd_trotter_circuit(&fixture.excitations, &params).unwrap();
    c.bench_function("uccsd_circuit_h6", |b| {
        b.iter_batched(
            || psi0.clone(),
            |mut psi| {
                psi.run_circuit(&ugates).unwrap();
                black_box(psi)
            },
            BatchSize::SmallInput,
        )
    });
}

fn bench_expectation(c: &mut Criterion) {
    let fixture = chain_fixture(6);
    let params =
        ParameterVector::new(vec![0.02; fixture.excitations.parameter_count()]).unwrap();
    let gates = qccsd_circuit(&fixture.excitations, &params).unwrap();
    let mut psi = StateVector::basis_state(12, fixture.reference).unwrap();
    psi.run_circuit(&gates).unwrap();
    c.bench_function("expectation_h6", |b| {
        b.iter(|| black_box(fixture.hamiltonian.expectation(psi.amplitudes()).unwrap()))
    });
}

fn bench_pipeline(c: &mut Criterion) {
    c.bench_function("sto3g_rhf_h4", |b| {
        let geometry = Geometry::hydrogen_chain(4, 1.0).unwrap();
        b.iter(|| {
            let ao = sto3g_hydrogen_integrals(&geometry).unwrap();
            black_box(qccsd_core::integrals::rhf_solve(&ao).unwrap())
        })
    });

    c.bench_function("jordan_wigner_h4", |b| {
        let geometry = Geometry::hydrogen_chain(4, 1.0).unwrap();
        let mi = hydrogen_mo_integrals(&geometry).unwrap();
        b.iter(|| {
            let op = build_hamiltonian(&mi, &ActiveSpace::full()).unwrap();
            black_box(jordan_wigner(&op).unwrap())
        })
    });

    c.bench_function("sector_fci_h4", |b| {
        let fixture = chain_fixture(4);
        let basis = SectorBasis::spin_sector(fixture.n_spatial, 2, 2).unwrap();
        b.iter(|| black_box(sector_ground_state(&fixture.hamiltonian, &basis).unwrap()))
    });

    c.bench_function("vqe_h2_qccsd", |b| {
        let fixture = chain_fixture(2);
        let problem = VqeProblem::new(
            fixture.hamiltonian.clone(),
            fixture.reference,
            fixture.excitations.clone(),
            AnsatzKind::Qccsd,
        )
        .unwrap();
        let start = ParameterVector::zeros(problem.parameter_count());
        b.iter(|| black_box(minimize(&problem, &start, &MinimizeOptions::default()).unwrap()))
    });
}

criterion_group!(benches, bench_gates, bench_expectation, bench_pipeline);
criterion_main!(benches);
