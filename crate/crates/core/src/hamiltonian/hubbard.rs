use std::fmt;

use nalgebra::{DMatrix, DVector};

use super::FermionHamiltonian;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Spin {
    Up,
    Down,
}

/// A lattice site (row-major index) together with a spin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpinOrbital {
    pub site: usize,
    pub spin: Spin,
}

impl SpinOrbital {
    pub fn new(site: usize, spin: Spin) -> Self {
        Self { site, spin }
    }
}

impl fmt::Display for SpinOrbital {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arrow = match self.spin {
            Spin::Up => '↑',
            Spin::Down => '↓',
        };
        write!(f, "{}{}", self.site, arrow)
    }
}

/// Open-boundary 2D Hubbard model laid out on a chain in snake order.
///
/// Rows are traversed alternately left-to-right and right-to-left, and the
/// k-th visited site puts its up orbital first when k is even, its down
/// orbital first otherwise. Consecutive chain entries across a site boundary
/// therefore always share a spin, and both orbitals of a site are adjacent.
#[derive(Debug, Clone, PartialEq)]
pub struct HubbardInstance {
    rows: usize,
    cols: usize,
    t_hop: f64,
    u_int: f64,
    snake_order: Vec<SpinOrbital>,
    positions: Vec<usize>,
    hop_edges: Vec<(SpinOrbital, SpinOrbital)>,
    onsite_pairs: Vec<(SpinOrbital, SpinOrbital)>,
}

/// Builds the snake-ordered Hubbard instance.
pub fn hubbard_2d(rows: usize, cols: usize, t_hop: f64, u_int: f64) -> Result<HubbardInstance> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidLattice { rows, cols });
    }
    if !t_hop.is_finite() || !u_int.is_finite() {
        return Err(Error::NonFinite("Hubbard parameters".into()));
    }
    let n_sites = rows * cols;
    let mut snake_order = Vec::with_capacity(2 * n_sites);
    for r in 0..rows {
        for step in 0..cols {
            let c = if r % 2 == 0 { step } else { cols - 1 - step };
            let site = r * cols + c;
            let visit = r * cols + step;
            let (first, second) = if visit.is_multiple_of(2) {
                (Spin::Up, Spin::Down)
            } else {
                (Spin::Down, Spin::Up)
            };
            snake_order.push(SpinOrbital::new(site, first));
            snake_order.push(SpinOrbital::new(site, second));
        }
    }
    let mut positions = vec![0; 2 * n_sites];
    for (pos, so) in snake_order.iter().enumerate() {
        positions[flat(*so)] = pos;
    }

    let mut hop_edges = Vec::new();
    for spin in [Spin::Up, Spin::Down] {
        for r in 0..rows {
            for c in 0..cols {
                let site = r * cols + c;
                if c + 1 < cols {
                    hop_edges.push((
                        SpinOrbital::new(site, spin),
                        SpinOrbital::new(site + 1, spin),
                    ));
                }
                if r + 1 < rows {
                    hop_edges.push((
                        SpinOrbital::new(site, spin),
                        SpinOrbital::new(site + cols, spin),
                    ));
                }
            }
        }
    }
    let onsite_pairs = (0..n_sites)
        .map(|s| {
            (
                SpinOrbital::new(s, Spin::Up),
                SpinOrbital::new(s, Spin::Down),
            )
        })
        .collect();

    Ok(HubbardInstance {
        rows,
        cols,
        t_hop,
        u_int,
        snake_order,
        positions,
        hop_edges,
        onsite_pairs,
    })
}

fn flat(so: SpinOrbital) -> usize {
    2 * so.site + usize::from(so.spin == Spin::Down)
}

impl HubbardInstance {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn t_hop(&self) -> f64 {
        self.t_hop
    }

    pub fn u_int(&self) -> f64 {
        self.u_int
    }

    /// Number of spin-orbitals, `2 · rows · cols`.
    pub fn n_modes(&self) -> usize {
        self.snake_order.len()
    }

    /// Spin-orbital at each chain position.
    pub fn snake_order(&self) -> &[SpinOrbital] {
        &self.snake_order
    }

    pub fn position(&self, so: SpinOrbital) -> usize {
        self.positions[flat(so)]
    }

    pub fn hop_edges(&self) -> &[(SpinOrbital, SpinOrbital)] {
        &self.hop_edges
    }

    pub fn onsite_pairs(&self) -> &[(SpinOrbital, SpinOrbital)] {
        &self.onsite_pairs
    }

    fn position_pair(&self, (a, b): (SpinOrbital, SpinOrbital)) -> (usize, usize) {
        let (pa, pb) = (self.position(a), self.position(b));
        (pa.min(pb), pa.max(pb))
    }

    /// Hop edges as sorted chain-position pairs.
    pub fn hop_positions(&self) -> Vec<(usize, usize)> {
        self.hop_edges
            .iter()
            .map(|&e| self.position_pair(e))
            .collect()
    }

    /// Onsite pairs as sorted chain-position pairs.
    pub fn onsite_positions(&self) -> Vec<(usize, usize)> {
        self.onsite_pairs
            .iter()
            .map(|&e| self.position_pair(e))
            .collect()
    }

    /// Coefficient tables indexed by chain position: `T = -t` on every hop
    /// edge, `V_pq = V_qp = U/2` on every onsite pair, `U = 0`.
    pub fn to_hamiltonian(&self) -> FermionHamiltonian {
        let n = self.n_modes();
        let mut t = DMatrix::zeros(n, n);
        let mut v = DMatrix::zeros(n, n);
        for (p, q) in self.hop_positions() {
            t[(p, q)] = -self.t_hop;
            t[(q, p)] = -self.t_hop;
        }
        for (p, q) in self.onsite_positions() {
            v[(p, q)] = self.u_int / 2.0;
            v[(q, p)] = self.u_int / 2.0;
        }
        FermionHamiltonian::new(t, DVector::zeros(n), v)
            .expect("Hubbard coefficients are symmetric and finite")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{jordan_wigner, Pauli};

    #[test]
    fn three_by_three_snake_matches_reference_ordering() {
        let inst = hubbard_2d(3, 3, 1.0, 4.0).unwrap();
        // 1-based sites as drawn: 1↑,1↓,2↓,2↑,3↑,3↓,6↓,6↑,5↑,5↓,4↓,4↑,7↑,7↓,8↓,8↑,9↑,9↓
        let expected: Vec<(usize, Spin)> = [
            (1, Spin::Up),
            (1, Spin::Down),
            (2, Spin::Down),
            (2, Spin::Up),
            (3, Spin::Up),
            (3, Spin::Down),
            (6, Spin::Down),
            (6, Spin::Up),
            (5, Spin::Up),
            (5, Spin::Down),
            (4, Spin::Down),
            (4, Spin::Up),
            (7, Spin::Up),
            (7, Spin::Down),
            (8, Spin::Down),
            (8, Spin::Up),
            (9, Spin::Up),
            (9, Spin::Down),
        ]
        .to_vec();
        let got: Vec<(usize, Spin)> = inst
            .snake_order()
            .iter()
            .map(|so| (so.site + 1, so.spin))
            .collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn counts_for_small_lattices() {
        let one = hubbard_2d(1, 1, 1.0, 1.0).unwrap();
        assert_eq!(
            (
                one.n_modes(),
                one.onsite_pairs().len(),
                one.hop_edges().len()
            ),
            (2, 1, 0)
        );
        let two = hubbard_2d(2, 2, 1.0, 1.0).unwrap();
        assert_eq!(
            (
                two.n_modes(),
                two.onsite_pairs().len(),
                two.hop_edges().len()
            ),
            (8, 4, 8)
        );
        assert!(matches!(
            hubbard_2d(0, 3, 1.0, 1.0),
            Err(Error::InvalidLattice { .. })
        ));
    }

    #[test]
    fn snake_is_bijection_with_adjacent_onsite_pairs() {
        for rows in 1..=6 {
            for cols in 1..=6 {
                let inst = hubbard_2d(rows, cols, 1.0, 1.0).unwrap();
                let mut seen = vec![false; inst.n_modes()];
                for so in inst.snake_order() {
                    assert!(!std::mem::replace(&mut seen[flat(*so)], true));
                }
                assert_eq!(inst.onsite_pairs().len(), rows * cols);
                assert_eq!(
                    inst.hop_edges().len(),
                    2 * (rows * (cols - 1) + cols * (rows - 1))
                );
                for (p, q) in inst.onsite_positions() {
                    assert_eq!(q, p + 1);
                }
                for so in inst.snake_order() {
                    assert_eq!(inst.snake_order()[inst.position(*so)], *so);
                }
            }
        }
    }

    #[test]
    fn coefficient_tables() {
        let h = hubbard_2d(1, 1, 1.0, 4.0).unwrap().to_hamiltonian();
        assert_eq!(h.interaction()[(0, 1)] + h.interaction()[(1, 0)], 4.0);
        assert!(h.one_body().iter().all(|&x| x == 0.0));

        let inst = hubbard_2d(1, 2, 1.0, 0.0).unwrap();
        let h = inst.to_hamiltonian();
        let hops: Vec<f64> = h.one_body().iter().copied().filter(|&x| x != 0.0).collect();
        assert_eq!(hops, vec![-1.0; 4]);
        for spin in [Spin::Up, Spin::Down] {
            let p = inst.position(SpinOrbital::new(0, spin));
            let q = inst.position(SpinOrbital::new(1, spin));
            assert_eq!(h.hopping(p, q), -1.0);
        }
    }

    #[test]
    fn two_by_two_pauli_structure() {
        let inst = hubbard_2d(2, 2, 1.0, 2.0).unwrap();
        let pauli = jordan_wigner(&inst.to_hamiltonian());
        let mut zz = 0;
        let mut hop = 0;
        let mut z = 0;
        for (s, _) in pauli.terms() {
            let support = s.support();
            match (support.len(), s.labels()[support[0]]) {
                (1, Pauli::Z) => z += 1,
                (2, Pauli::Z) => {
                    zz += 1;
                    assert_eq!(support[1], support[0] + 1);
                }
                (_, Pauli::X | Pauli::Y) => hop += 1,
                other => panic!("unexpected term shape {other:?}"),
            }
        }
        assert_eq!(zz, 4);
        assert_eq!(hop, 2 * 8);
        assert_eq!(z, 8);
    }
}
