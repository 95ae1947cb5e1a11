use ndarray::Array1;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::lattice::Lattice;

fn random_params(n_e: usize, n_s: usize, n_h: usize, scale: f64, seed: u64) -> RbmParams<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p = RbmParams::<f64>::zeros(n_e, n_s, n_h);
    for x in p
        .u
        .iter_mut()
        .chain(p.w.iter_mut())
        .chain(p.b.iter_mut())
        .chain(p.c.iter_mut())
        .chain(p.d.iter_mut())
    {
        *x = rng.gen_range(-scale..scale);
    }
    p
}

fn bits(code: u64, n: usize) -> Vec<bool> {
    (0..n).map(|i| code >> i & 1 == 1).collect()
}

/// `Σ_h exp(-E(e, S, h))` by explicit enumeration of the hidden layer.
fn hidden_sum(p: &RbmParams<f64>, e: &[bool], s: &[bool]) -> f64 {
    (0..1u64 << p.n_h())
        .map(|code| {
            let st = MachineState {
                e: e.to_vec(),
                s: s.to_vec(),
                h: bits(code, p.n_h()),
            };
            (-p.energy(&st).unwrap()).exp()
        })
        .sum()
}

#[test]
fn energy_of_zero_model_or_zero_state() {
    let zero = RbmParams::<f64>::zeros(3, 2, 4);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..10 {
        let st = MachineState::random(3, 2, 4, &mut rng);
        assert_eq!(zero.energy(&st).unwrap(), 0.0);
    }
    let p = random_params(3, 2, 4, 1.0, 1);
    assert_eq!(p.energy(&MachineState::zeros(3, 2, 4)).unwrap(), 0.0);
}

#[test]
fn energy_hand_example() {
    let mut p = RbmParams::<f64>::zeros(2, 1, 1);
    p.u.fill(1.0);
    p.w.fill(1.0);
    p.b.fill(1.0);
    p.c.fill(1.0);
    p.d.fill(1.0);
    let st = MachineState {
        e: vec![true, true],
        s: vec![true],
        h: vec![true],
    };
    assert_eq!(p.energy(&st).unwrap(), -7.0);
}

#[test]
fn dimension_mismatch_rejected() {
    let p = RbmParams::<f64>::zeros(3, 2, 4);
    assert!(p.energy(&MachineState::zeros(3, 2, 5)).is_err());
    assert!(p.effective_energy(&[false; 2], &[false; 2]).is_err());
    assert!(p.prob_h_given_vis(&[false; 3], &[false; 3]).is_err());
    assert!(p.prob_e_given_h(&[false; 3]).is_err());
    assert!(p.prob_s_given_h(&[false; 5]).is_err());
}

#[test]
fn effective_energy_of_zero_model() {
    let p = RbmParams::<f64>::zeros(4, 2, 7);
    let ee = p.effective_energy(&[true, false, true, true], &[false, true]).unwrap();
    assert!((ee + 7.0 * 2f64.ln()).abs() < 1e-14);
}

#[test]
fn effective_energy_marginalizes_hidden_layer() {
    for (seed, n_h) in [(1, 1), (2, 3), (3, 7), (4, 12)] {
        let p = random_params(4, 2, n_h, 0.5, seed);
        for code in 0..64u64 {
            let (e, s) = (bits(code, 4), bits(code >> 4, 2));
            let exact = hidden_sum(&p, &e, &s);
            let fe = (-p.effective_energy(&e, &s).unwrap()).exp();
            assert!(((fe - exact) / exact).abs() < 1e-10, "n_h={n_h} code={code}");
        }
    }
}

#[test]
fn effective_energy_survives_huge_fields() {
    let mut p = RbmParams::<f64>::zeros(1, 1, 1);
    p.c[0] = 800.0;
    let ee = p.effective_energy(&[false], &[false]).unwrap();
    assert!(ee.is_finite());
    assert!((ee + 800.0).abs() < 1e-9);
    p.c[0] = -1000.0;
    assert!(p.effective_energy(&[false], &[false]).unwrap().is_finite());
}

#[test]
fn hidden_conditional_matches_enumeration() {
    let p = random_params(4, 2, 5, 1.0, 7);
    let e = [true, false, false, true];
    let s = [false, true];
    let z = hidden_sum(&p, &e, &s);
    let mut marginal = Array1::<f64>::zeros(5);
    for code in 0..1u64 << 5 {
        let h = bits(code, 5);
        let st = MachineState {
            e: e.to_vec(),
            s: s.to_vec(),
            h: h.clone(),
        };
        let w = (-p.energy(&st).unwrap()).exp() / z;
        for (m, &hi) in marginal.iter_mut().zip(&h) {
            if hi {
                *m += w;
            }
        }
    }
    let ph = p.prob_h_given_vis(&e, &s).unwrap();
    for (a, b) in ph.iter().zip(marginal.iter()) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn hidden_conditional_limits() {
    let mut p = RbmParams::<f64>::zeros(3, 2, 4);
    let ph = p.prob_h_given_vis(&[true; 3], &[true; 2]).unwrap();
    assert!(ph.iter().all(|&x| x == 0.5));
    p.c[2] = 50.0;
    let ph = p.prob_h_given_vis(&[false; 3], &[false; 2]).unwrap();
    assert!((ph[2] - 1.0).abs() < 1e-12);
}

#[test]
fn visible_conditionals_match_exact_joint() {
    let p = random_params(3, 2, 3, 1.0, 11);
    let h = [true, false, true];
    // p(e, S | h) ∝ exp(-E) over all (e, S) at fixed h.
    let mut z = 0.0;
    let mut pe = [0.0; 3];
    let mut ps = [0.0; 2];
    for (e, s) in VisibleConfigs::new(3, 2) {
        let st = MachineState {
            e: e.clone(),
            s: s.clone(),
            h: h.to_vec(),
        };
        let w = (-p.energy(&st).unwrap()).exp();
        z += w;
        for j in 0..3 {
            if e[j] {
                pe[j] += w;
            }
        }
        for k in 0..2 {
            if s[k] {
                ps[k] += w;
            }
        }
    }
    let fe = p.prob_e_given_h(&h).unwrap();
    let fs = p.prob_s_given_h(&h).unwrap();
    for j in 0..3 {
        assert!((fe[j] - pe[j] / z).abs() < 1e-12);
    }
    for k in 0..2 {
        assert!((fs[k] - ps[k] / z).abs() < 1e-12);
    }

    let zero = RbmParams::<f64>::zeros(3, 2, 3);
    assert!(zero.prob_e_given_h(&h).unwrap().iter().all(|&x| x == 0.5));
    let bias_only = p.prob_e_given_h(&[false; 3]).unwrap();
    for j in 0..3 {
        assert!((bias_only[j] - p.b[j].sigmoid()).abs() < 1e-15);
    }
    let bias_only = p.prob_s_given_h(&[false; 3]).unwrap();
    for k in 0..2 {
        assert!((bias_only[k] - p.d[k].sigmoid()).abs() < 1e-15);
    }
}

#[test]
fn clamped_sweep_keeps_syndrome() {
    let p = random_params(4, 3, 5, 1.0, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut st = MachineState::random(4, 3, 5, &mut rng);
    let s0 = st.s.clone();
    for _ in 0..100 {
        p.gibbs_sweep(&mut st, true, &mut rng).unwrap();
        assert_eq!(st.s, s0);
    }
}

#[test]
fn zero_model_sweep_gives_fair_coins() {
    let p = RbmParams::<f64>::zeros(3, 2, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut st = MachineState::zeros(3, 2, 2);
    let n = 40_000;
    let mut ones = [0usize; 7];
    for _ in 0..n {
        p.gibbs_sweep(&mut st, false, &mut rng).unwrap();
        for (c, b) in ones.iter_mut().zip(st.e.iter().chain(&st.s).chain(&st.h)) {
            *c += *b as usize;
        }
    }
    let sigma = (0.25 / n as f64).sqrt();
    for c in ones {
        assert!((c as f64 / n as f64 - 0.5).abs() < 5.0 * sigma);
    }
}

#[test]
fn clamped_chain_matches_generic_sweep() {
    // Same rng stream and same state must give the same trajectory.
    let p = random_params(6, 3, 4, 1.0, 21);
    let s0 = vec![true, false, true];
    let mut walker = ClampedChain::new(&p, &s0).unwrap();
    let mut st = MachineState {
        e: vec![false; 6],
        s: s0.clone(),
        h: vec![false; 4],
    };
    let mut r1 = ChaCha8Rng::seed_from_u64(2);
    let mut r2 = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        walker.sweep(&mut r1);
        p.gibbs_sweep(&mut st, true, &mut r2).unwrap();
        assert_eq!(walker.error_layer(), &st.e[..]);
        assert_eq!(walker.hidden_layer(), &st.h[..]);
    }
}

#[test]
fn clamped_stationary_distribution_matches_exact_conditional() {
    let p = random_params(4, 2, 3, 1.0, 31);
    let s0 = [true, false];
    // Exact p(e, h | S0) over 2^7 states, index = e | h << 4.
    let mut exact = vec![0.0; 128];
    for (idx, slot) in exact.iter_mut().enumerate() {
        let st = MachineState {
            e: bits(idx as u64, 4),
            s: s0.to_vec(),
            h: bits(idx as u64 >> 4, 3),
        };
        *slot = (-p.energy(&st).unwrap()).exp();
    }
    let z: f64 = exact.iter().sum();
    exact.iter_mut().for_each(|x| *x /= z);

    let mut walker = ClampedChain::new(&p, &s0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    walker.randomize(&mut rng);
    for _ in 0..100 {
        walker.sweep(&mut rng);
    }
    let n = 200_000;
    let mut counts = vec![0usize; 128];
    for _ in 0..n {
        walker.sweep(&mut rng);
        let code = walker
            .error_layer()
            .iter()
            .chain(walker.hidden_layer())
            .enumerate()
            .fold(0usize, |acc, (i, &b)| acc | (b as usize) << i);
        counts[code] += 1;
    }
    let tv: f64 = counts
        .iter()
        .zip(&exact)
        .map(|(&c, &q)| (c as f64 / n as f64 - q).abs())
        .sum::<f64>()
        / 2.0;
    assert!(tv < 0.02, "total variation {tv}");
}

#[test]
fn log_partition_of_zero_model() {
    let p = RbmParams::<f64>::zeros(4, 3, 5);
    let lz = p.exact_log_partition().unwrap();
    assert!((lz - 12.0 * 2f64.ln()).abs() < 1e-12);
}

#[test]
fn log_partition_matches_joint_enumeration() {
    let p = random_params(4, 2, 4, 1.0, 13);
    let mut z = 0.0;
    for code in 0..1u64 << 10 {
        let st = MachineState {
            e: bits(code, 4),
            s: bits(code >> 4, 2),
            h: bits(code >> 6, 4),
        };
        z += (-p.energy(&st).unwrap()).exp();
    }
    let lz = p.exact_log_partition().unwrap();
    assert!(((lz - z.ln()) / z.ln()).abs() < 1e-10);

    let total: f64 = VisibleConfigs::new(4, 2)
        .map(|(e, s)| p.log_prob(&e, &s, lz).unwrap().exp())
        .sum();
    assert!((total - 1.0).abs() < 1e-12);
}

#[test]
fn bias_shift_reweights_partition_function() {
    let p = random_params(4, 2, 3, 1.0, 17);
    let shift = 0.7;
    let mut shifted = p.clone();
    shifted.b.mapv_inplace(|x| x + shift);
    let reweighted: Vec<f64> = VisibleConfigs::new(4, 2)
        .map(|(e, s)| {
            let ones = e.iter().filter(|&&b| b).count() as f64;
            -p.effective_energy(&e, &s).unwrap() + shift * ones
        })
        .collect();
    let expected = log_sum_exp(&reweighted);
    assert!((shifted.exact_log_partition().unwrap() - expected).abs() < 1e-12);
}

#[test]
fn oracle_size_limit() {
    let p = RbmParams::<f64>::zeros(16, 5, 1);
    assert!(matches!(
        p.exact_log_partition(),
        Err(Error::OracleSizeExceeded { visible: 21, limit: 20 })
    ));
}

#[test]
fn f32_agrees_with_f64() {
    let p = random_params(5, 3, 4, 1.0, 19);
    let q: RbmParams<f32> = p.cast();
    let e = [true, false, true, true, false];
    let s = [false, true, true];
    let a = p.effective_energy(&e, &s).unwrap();
    let b = q.effective_energy(&e, &s).unwrap() as f64;
    assert!((a - b).abs() < 1e-5);
}

#[test]
fn model_file_round_trip() {
    let lat = Lattice::new(2).unwrap();
    let p = random_params(8, 4, 3, 1.0, 23);
    let header = ModelHeader {
        lattice: lat,
        n_h: 3,
        p_err: 0.1,
    };
    let bytes = encode_model(&header, &p).unwrap();
    assert_eq!(&bytes[..4], b"TNRB");
    assert_eq!(bytes.len(), 20 + 8 * (3 * 4 + 3 * 8 + 8 + 3 + 4));
    let (h2, p2) = decode_model::<f64>(&bytes).unwrap();
    assert_eq!(h2, header);
    assert_eq!(p2, p);
    // Row-major: first payload value is U[0, 0], the next U[0, 1].
    assert_eq!(&bytes[20..28], &p.u[[0, 0]].to_le_bytes());
    assert_eq!(&bytes[28..36], &p.u[[0, 1]].to_le_bytes());

    assert!(matches!(decode_model::<f64>(&bytes[..bytes.len() - 3]), Err(Error::Truncated { .. })));
    let mut bad = bytes.clone();
    bad[3] = b'X';
    assert!(matches!(decode_model::<f64>(&bad), Err(Error::BadMagic { .. })));
    let wrong = RbmParams::<f64>::zeros(8, 4, 2);
    assert!(encode_model(&header, &wrong).is_err());

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.tnrb");
    save_model(&header, &p, &path).unwrap();
    let (_, p3) = load_model::<f32>(&path).unwrap();
    assert!((p3.w[[1, 2]] as f64 - p.w[[1, 2]]).abs() < 1e-6);
}
