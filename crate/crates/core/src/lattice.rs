//! Toric-code geometry on an `L x L` periodic square lattice.
//!
//! Qubits live on links. A horizontal link `(x, y)` joins vertex `(x, y)` to
//! `((x + 1) mod L, y)`; a vertical link `(x, y)` joins `(x, y)` to
//! `(x, (y + 1) mod L)`. Links are stored flat at
//! `orientation * L^2 + y * L + x`, vertices at `y * L + x`.
//!
//! Only phase-flip errors are modelled, so a chain's syndrome is its boundary
//! under the vertex checks. Plaquette checks act trivially on such chains and
//! are not represented.

use std::fmt;
use std::ops::BitXor;

use crate::error::{check_len, Error, Result};

/// Vertex coordinates `(x, y)`.
pub type Vertex = (usize, usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Horizontal = 0,
    Vertical = 1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Lattice {
    size: usize,
}

impl Lattice {
    pub fn new(size: usize) -> Result<Self> {
        if size < 2 {
            return Err(Error::InvalidLattice(size));
        }
        Ok(Lattice { size })
    }

    /// Linear size `L`.
    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    /// Number of qubits, `2 L^2`.
    #[inline]
    pub fn n_links(&self) -> usize {
        2 * self.size * self.size
    }

    /// Number of vertex checks, `L^2`.
    #[inline]
    pub fn n_vertices(&self) -> usize {
        self.size * self.size
    }

    #[inline]
    pub fn link_index(&self, x: usize, y: usize, orientation: Orientation) -> usize {
        debug_assert!(x < self.size && y < self.size);
        orientation as usize * self.size * self.size + y * self.size + x
    }

    #[inline]
    pub fn vertex_index(&self, (x, y): Vertex) -> usize {
        debug_assert!(x < self.size && y < self.size);
        y * self.size + x
    }

    #[inline]
    pub fn vertex_at(&self, index: usize) -> Vertex {
        (index % self.size, index / self.size)
    }

    /// Inverse of [`Lattice::link_index`].
    pub fn link_at(&self, index: usize) -> (usize, usize, Orientation) {
        let n = self.size * self.size;
        let orientation = if index < n {
            Orientation::Horizontal
        } else {
            Orientation::Vertical
        };
        let r = index % n;
        (r % self.size, r / self.size, orientation)
    }

    /// The two vertex indices joined by a link.
    #[inline]
    pub fn endpoints(&self, link: usize) -> (usize, usize) {
        let (x, y, orientation) = self.link_at(link);
        let l = self.size;
        let a = y * l + x;
        let b = match orientation {
            Orientation::Horizontal => y * l + (x + 1) % l,
            Orientation::Vertical => ((y + 1) % l) * l + x,
        };
        (a, b)
    }

    pub fn empty_chain(&self) -> Chain {
        Chain::zeros(self.n_links())
    }

    pub fn empty_syndrome(&self) -> Syndrome {
        Syndrome::zeros(self.n_vertices())
    }

    /// The boundary of `chain`: vertex `v` is flagged when an odd number of its
    /// four incident links carry an error.
    pub fn syndrome_of(&self, chain: &Chain) -> Result<Syndrome> {
        check_len("chain", self.n_links(), chain.len())?;
        Ok(self.syndrome_of_bits(chain.iter_ones()))
    }

    pub(crate) fn syndrome_of_bits(&self, ones: impl Iterator<Item = usize>) -> Syndrome {
        let mut bits = vec![false; self.n_vertices()];
        for link in ones {
            let (a, b) = self.endpoints(link);
            bits[a] ^= true;
            bits[b] ^= true;
        }
        Syndrome { bits }
    }

    /// Winding parities of a cycle measured across the `x = 0|1` and `y = 0|1` cuts.
    pub fn homology_class(&self, cycle: &Chain) -> Result<HomologyClass> {
        if !self.syndrome_of(cycle)?.is_empty() {
            return Err(Error::NotACycle);
        }
        Ok(HomologyClass {
            wx: self.winding_x(cycle, 0),
            wy: self.winding_y(cycle, 0),
        })
    }

    /// Parity of horizontal links `(k, y)`, `y` in `[0, L)`: the crossings of the
    /// cut between columns `k` and `k + 1`.
    pub fn winding_x(&self, chain: &Chain, k: usize) -> bool {
        (0..self.size).fold(false, |acc, y| {
            acc ^ chain.get(self.link_index(k, y, Orientation::Horizontal))
        })
    }

    /// Parity of vertical links `(x, k)`, the crossings of the cut between rows `k` and `k + 1`.
    pub fn winding_y(&self, chain: &Chain, k: usize) -> bool {
        (0..self.size).fold(false, |acc, x| {
            acc ^ chain.get(self.link_index(x, k, Orientation::Vertical))
        })
    }

    /// Canonical cycle of a class: the row-0 horizontal loop for `(1,0)`, the
    /// column-0 vertical loop for `(0,1)`, their sum for `(1,1)`.
    pub fn logical_representative(&self, class: HomologyClass) -> Chain {
        let mut chain = self.empty_chain();
        for t in 0..self.size {
            if class.wx {
                chain.toggle(self.link_index(t, 0, Orientation::Horizontal));
            }
            if class.wy {
                chain.toggle(self.link_index(0, t, Orientation::Vertical));
            }
        }
        chain
    }

    /// The four links around the plaquette whose lower-left corner is `(x, y)`.
    pub fn plaquette_boundary(&self, x: usize, y: usize) -> Chain {
        let l = self.size;
        let mut chain = self.empty_chain();
        chain.toggle(self.link_index(x, y, Orientation::Horizontal));
        chain.toggle(self.link_index(x, (y + 1) % l, Orientation::Horizontal));
        chain.toggle(self.link_index(x, y, Orientation::Vertical));
        chain.toggle(self.link_index((x + 1) % l, y, Orientation::Vertical));
        chain
    }
}

/// A subset of links, as a bit vector over `2 L^2` positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chain {
    bits: Vec<bool>,
}

impl Chain {
    pub fn zeros(len: usize) -> Self {
        Chain {
            bits: vec![false; len],
        }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Chain { bits }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    #[inline]
    pub fn get(&self, link: usize) -> bool {
        self.bits[link]
    }

    #[inline]
    pub fn set(&mut self, link: usize, value: bool) {
        self.bits[link] = value;
    }

    #[inline]
    pub fn toggle(&mut self, link: usize) {
        self.bits[link] ^= true;
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn into_bits(self) -> Vec<bool> {
        self.bits
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
    }

    /// Link-wise XOR, `self ⊕ other`.
    pub fn compose(&self, other: &Chain) -> Result<Chain> {
        check_len("chain", self.len(), other.len())?;
        Ok(Chain {
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(&a, &b)| a ^ b)
                .collect(),
        })
    }

    pub fn compose_in_place(&mut self, other: &Chain) -> Result<()> {
        check_len("chain", self.len(), other.len())?;
        for (a, &b) in self.bits.iter_mut().zip(&other.bits) {
            *a ^= b;
        }
        Ok(())
    }
}

/// Vertex-check outcomes, one bit per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Syndrome {
    bits: Vec<bool>,
}

impl Syndrome {
    pub fn zeros(len: usize) -> Self {
        Syndrome {
            bits: vec![false; len],
        }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Syndrome { bits }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    /// True when no check is violated.
    #[inline]
    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    #[inline]
    pub fn get(&self, vertex: usize) -> bool {
        self.bits[vertex]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Number of flagged vertices.
    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn xor(&self, other: &Syndrome) -> Result<Syndrome> {
        check_len("syndrome", self.len(), other.len())?;
        Ok(Syndrome {
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(&a, &b)| a ^ b)
                .collect(),
        })
    }

    /// Flagged vertices as coordinates, in increasing index order.
    pub fn defects(&self, lattice: &Lattice) -> Result<Vec<Vertex>> {
        check_len("syndrome", lattice.n_vertices(), self.len())?;
        Ok(self
            .bits
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then(|| lattice.vertex_at(i)))
            .collect())
    }
}

/// One of the four homology classes of cycles on the torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct HomologyClass {
    /// Winding parity across the vertical cut (horizontal loops, first logical).
    pub wx: bool,
    /// Winding parity across the horizontal cut (vertical loops, second logical).
    pub wy: bool,
}

impl HomologyClass {
    pub const TRIVIAL: HomologyClass = HomologyClass { wx: false, wy: false };
    pub const Z1: HomologyClass = HomologyClass { wx: true, wy: false };
    pub const Z2: HomologyClass = HomologyClass { wx: false, wy: true };
    pub const Z1Z2: HomologyClass = HomologyClass { wx: true, wy: true };

    /// Histogram order: trivial, Z1, Z2, Z1Z2.
    pub const ALL: [HomologyClass; 4] = [Self::TRIVIAL, Self::Z1, Self::Z2, Self::Z1Z2];

    pub fn new(wx: bool, wy: bool) -> Self {
        HomologyClass { wx, wy }
    }

    /// Position in [`HomologyClass::ALL`].
    #[inline]
    pub fn index(self) -> usize {
        self.wx as usize + 2 * self.wy as usize
    }

    pub fn from_index(index: usize) -> Self {
        Self::ALL[index & 3]
    }

    pub fn is_trivial(self) -> bool {
        !self.wx && !self.wy
    }
}

impl BitXor for HomologyClass {
    type Output = HomologyClass;

    fn bitxor(self, rhs: Self) -> Self {
        HomologyClass {
            wx: self.wx ^ rhs.wx,
            wy: self.wy ^ rhs.wy,
        }
    }
}

impl fmt::Display for HomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match (self.wx, self.wy) {
            (false, false) => "h0",
            (true, false) => "Z1",
            (false, true) => "Z2",
            (true, true) => "Z1Z2",
        };
        f.write_str(name)
    }
}
