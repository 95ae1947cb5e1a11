//! Exact minimum-weight perfect matching on the torus.
//!
//! Defects are paired by a subset dynamic program over bitmasks of still
//! unmatched defects, always pairing the lowest unmatched index. That is
//! exact and fast enough for the defect counts seen on small lattices;
//! larger instances are refused rather than approximated.

use super::{DecodeOutcome, Decoder};
use crate::error::{Error, Result};
use crate::lattice::{Chain, Lattice, Orientation, Syndrome, Vertex};
use crate::rng::SimRng;

/// Largest defect count the matcher accepts.
pub const MAX_DEFECTS: usize = 24;

/// Manhattan distance on the `L x L` torus.
pub fn torus_distance(u: Vertex, v: Vertex, size: usize) -> usize {
    let wrap = |a: usize, b: usize| {
        let d = a.abs_diff(b);
        d.min(size - d)
    };
    wrap(u.0, v.0) + wrap(u.1, v.1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    /// Pairs of indices into the defect list.
    pub pairs: Vec<(usize, usize)>,
    pub weight: usize,
}

pub fn min_weight_matching(defects: &[Vertex], size: usize) -> Result<Matching> {
    let n = defects.len();
    if n % 2 == 1 {
        return Err(Error::InvalidSyndrome(n));
    }
    if n > MAX_DEFECTS {
        return Err(Error::InstanceTooLarge {
            defects: n,
            limit: MAX_DEFECTS,
        });
    }
    if n == 0 {
        return Ok(Matching {
            pairs: Vec::new(),
            weight: 0,
        });
    }
    let dist: Vec<Vec<u32>> = defects
        .iter()
        .map(|&u| defects.iter().map(|&v| torus_distance(u, v, size) as u32).collect())
        .collect();

    let full = (1usize << n) - 1;
    let mut best = vec![u32::MAX; full + 1];
    let mut partner = vec![0u8; full + 1];
    best[0] = 0;
    for mask in 1..=full {
        if mask.count_ones() % 2 == 1 {
            continue;
        }
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let mut bits = rest;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let sub = best[rest & !(1 << j)];
            if sub == u32::MAX {
                continue;
            }
            let cand = sub + dist[i][j];
            if cand < best[mask] {
                best[mask] = cand;
                partner[mask] = j as u8;
            }
        }
    }

    let mut pairs = Vec::with_capacity(n / 2);
    let mut mask = full;
    while mask != 0 {
        let i = mask.trailing_zeros() as usize;
        let j = partner[mask] as usize;
        pairs.push((i, j));
        mask &= !(1 << i) & !(1 << j);
    }
    Ok(Matching {
        pairs,
        weight: best[full] as usize,
    })
}

/// A shortest path from `u` to `v`: horizontal steps first along the shorter
/// wrap (positive direction on ties), then vertical steps in column `v.0`.
pub fn pair_path(lattice: &Lattice, u: Vertex, v: Vertex) -> Vec<usize> {
    let l = lattice.size();
    let mut links = Vec::with_capacity(torus_distance(u, v, l));
    let forward = |from: usize, to: usize| (to + l - from) % l;

    let dx = forward(u.0, v.0);
    if dx <= l - dx {
        for t in 0..dx {
            links.push(lattice.link_index((u.0 + t) % l, u.1, Orientation::Horizontal));
        }
    } else {
        for t in 1..=l - dx {
            links.push(lattice.link_index((u.0 + l - t) % l, u.1, Orientation::Horizontal));
        }
    }
    let dy = forward(u.1, v.1);
    if dy <= l - dy {
        for t in 0..dy {
            links.push(lattice.link_index(v.0, (u.1 + t) % l, Orientation::Vertical));
        }
    } else {
        for t in 1..=l - dy {
            links.push(lattice.link_index(v.0, (u.1 + l - t) % l, Orientation::Vertical));
        }
    }
    links
}

/// Recovery chain from an exact minimum-weight matching of the syndrome defects.
pub fn mwpm_decode(lattice: &Lattice, syndrome: &Syndrome) -> Result<Chain> {
    let defects = syndrome.defects(lattice)?;
    let matching = min_weight_matching(&defects, lattice.size())?;
    let mut chain = lattice.empty_chain();
    for &(i, j) in &matching.pairs {
        for link in pair_path(lattice, defects[i], defects[j]) {
            chain.toggle(link);
        }
    }
    Ok(chain)
}

#[derive(Debug, Clone)]
pub struct MwpmDecoder {
    lattice: Lattice,
}

impl MwpmDecoder {
    pub fn new(lattice: Lattice) -> Self {
        MwpmDecoder { lattice }
    }
}

impl Decoder for MwpmDecoder {
    fn name(&self) -> &str {
        "mwpm"
    }

    fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    fn decode(&self, syndrome: &Syndrome, _rng: &mut SimRng) -> Result<DecodeOutcome> {
        Ok(DecodeOutcome {
            recovery: mwpm_decode(&self.lattice, syndrome)?,
            sweeps_used: 0,
            timed_out: false,
        })
    }
}
