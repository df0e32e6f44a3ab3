//! Periodic cubic lattice geometry and its symmetry group.
//!
//! Sites are indexed lexicographically with `x` running fastest:
//! `index = x + Lx * (y + Ly * z)`. Every matrix built in this crate uses
//! that ordering.
//!
//! Rotations act about the origin site `(0,0,0)`. The two generators are
//! the quarter turns [`Rotation::rx`] and [`Rotation::rz`]; their inverses
//! act on coordinates as `(x,y,z) -> (x,z,-y)` and `(x,y,z) -> (y,-x,z)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dimensions of a periodic `Lx × Ly × Lz` lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[usize; 3]", into = "[usize; 3]")]
pub struct LatticeSpec {
    dims: [usize; 3],
}

impl LatticeSpec {
    pub fn new(dims: [usize; 3]) -> Result<Self> {
        if dims.iter().any(|&l| l < 2) {
            return Err(Error::pre(format!(
                "every lattice dimension must be at least 2, got {dims:?}"
            )));
        }
        Ok(LatticeSpec { dims })
    }

    pub fn cubic(l: usize) -> Result<Self> {
        Self::new([l, l, l])
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn volume(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_even(&self) -> bool {
        self.dims.iter().all(|l| l % 2 == 0)
    }

    pub fn is_cubic(&self) -> bool {
        self.dims[0] == self.dims[1] && self.dims[1] == self.dims[2]
    }

    /// Reject lattices with an odd side; staggered sign fields are not
    /// single-valued on them.
    pub fn require_even(&self, what: &str) -> Result<()> {
        if self.is_even() {
            Ok(())
        } else {
            Err(Error::pre(format!(
                "{what} requires even lattice dimensions, got {:?}",
                self.dims
            )))
        }
    }

    pub fn require_divisible_by_4(&self, what: &str) -> Result<()> {
        if self.dims.iter().all(|l| l % 4 == 0) {
            Ok(())
        } else {
            Err(Error::pre(format!(
                "{what} requires every lattice dimension divisible by 4, got {:?}",
                self.dims
            )))
        }
    }

    pub(crate) fn require_same(&self, other: &LatticeSpec) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::LatticeMismatch(self.dims, other.dims))
        }
    }

    /// Site with the given coordinates reduced modulo the dimensions.
    pub fn site(&self, coords: [i64; 3]) -> Site {
        let mut c = [0usize; 3];
        for i in 0..3 {
            c[i] = coords[i].rem_euclid(self.dims[i] as i64) as usize;
        }
        Site(c)
    }

    pub fn origin(&self) -> Site {
        Site([0, 0, 0])
    }

    pub fn index(&self, s: Site) -> usize {
        let [x, y, z] = s.0;
        x + self.dims[0] * (y + self.dims[1] * z)
    }

    pub fn site_at(&self, index: usize) -> Site {
        let [lx, ly, _] = self.dims;
        Site([index % lx, (index / lx) % ly, index / (lx * ly)])
    }

    /// All sites in index order.
    pub fn sites(&self) -> impl Iterator<Item = Site> + '_ {
        (0..self.volume()).map(move |i| self.site_at(i))
    }

    /// `s + n` reduced modulo the dimensions.
    pub fn neighbor(&self, s: Site, n: Direction) -> Result<Site> {
        if n == Direction::OnSite {
            return Err(Error::pre("neighbor() needs a link direction, not OnSite"));
        }
        Ok(self.step(s, n))
    }

    /// Like [`neighbor`](Self::neighbor) but `OnSite` maps `s` to itself.
    pub(crate) fn step(&self, s: Site, n: Direction) -> Site {
        self.translate(s, n.vector())
    }

    pub fn translate(&self, s: Site, by: [i64; 3]) -> Site {
        let c = s.coords_i64();
        self.site([c[0] + by[0], c[1] + by[1], c[2] + by[2]])
    }

    pub(crate) fn step_index(&self, index: usize, n: Direction) -> usize {
        self.index(self.step(self.site_at(index), n))
    }
}

impl TryFrom<[usize; 3]> for LatticeSpec {
    type Error = Error;

    fn try_from(dims: [usize; 3]) -> Result<Self> {
        LatticeSpec::new(dims)
    }
}

impl From<LatticeSpec> for [usize; 3] {
    fn from(l: LatticeSpec) -> Self {
        l.dims
    }
}

impl fmt::Display for LatticeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x, y, z] = self.dims;
        write!(f, "{x}x{y}x{z}")
    }
}

/// A lattice site; coordinates are always reduced into `[0, L_i)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Site(pub(crate) [usize; 3]);

impl Site {
    pub fn coords(&self) -> [usize; 3] {
        self.0
    }

    pub fn x(&self) -> usize {
        self.0[0]
    }

    pub fn y(&self) -> usize {
        self.0[1]
    }

    pub fn z(&self) -> usize {
        self.0[2]
    }

    pub(crate) fn coords_i64(&self) -> [i64; 3] {
        [self.0[0] as i64, self.0[1] as i64, self.0[2] as i64]
    }

    /// `(-1)^(x+y+z)`.
    pub fn parity_sign(&self) -> f64 {
        if (self.0[0] + self.0[1] + self.0[2]) % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

/// Hopping direction: one of the six unit steps, or the on-site term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    PlusX,
    MinusX,
    PlusY,
    MinusY,
    PlusZ,
    MinusZ,
    OnSite,
}

impl Direction {
    /// The six link directions in canonical order `+x,-x,+y,-y,+z,-z`.
    pub const LINKS: [Direction; 6] = [
        Direction::PlusX,
        Direction::MinusX,
        Direction::PlusY,
        Direction::MinusY,
        Direction::PlusZ,
        Direction::MinusZ,
    ];

    pub const POSITIVE: [Direction; 3] = [Direction::PlusX, Direction::PlusY, Direction::PlusZ];

    pub fn positive(axis: usize) -> Direction {
        Self::POSITIVE[axis]
    }

    pub fn vector(self) -> [i64; 3] {
        match self {
            Direction::PlusX => [1, 0, 0],
            Direction::MinusX => [-1, 0, 0],
            Direction::PlusY => [0, 1, 0],
            Direction::MinusY => [0, -1, 0],
            Direction::PlusZ => [0, 0, 1],
            Direction::MinusZ => [0, 0, -1],
            Direction::OnSite => [0, 0, 0],
        }
    }

    pub fn from_vector(v: [i64; 3]) -> Option<Direction> {
        Some(match v {
            [1, 0, 0] => Direction::PlusX,
            [-1, 0, 0] => Direction::MinusX,
            [0, 1, 0] => Direction::PlusY,
            [0, -1, 0] => Direction::MinusY,
            [0, 0, 1] => Direction::PlusZ,
            [0, 0, -1] => Direction::MinusZ,
            [0, 0, 0] => Direction::OnSite,
            _ => return None,
        })
    }

    pub fn negate(self) -> Direction {
        match self {
            Direction::PlusX => Direction::MinusX,
            Direction::MinusX => Direction::PlusX,
            Direction::PlusY => Direction::MinusY,
            Direction::MinusY => Direction::PlusY,
            Direction::PlusZ => Direction::MinusZ,
            Direction::MinusZ => Direction::PlusZ,
            Direction::OnSite => Direction::OnSite,
        }
    }

    /// Axis index 0/1/2, `None` for `OnSite`.
    pub fn axis(self) -> Option<usize> {
        match self {
            Direction::PlusX | Direction::MinusX => Some(0),
            Direction::PlusY | Direction::MinusY => Some(1),
            Direction::PlusZ | Direction::MinusZ => Some(2),
            Direction::OnSite => None,
        }
    }

    pub fn is_positive(self) -> bool {
        matches!(self, Direction::PlusX | Direction::PlusY | Direction::PlusZ)
    }

    /// Position in [`Direction::LINKS`].
    pub(crate) fn link_slot(self) -> usize {
        match self {
            Direction::PlusX => 0,
            Direction::MinusX => 1,
            Direction::PlusY => 2,
            Direction::MinusY => 3,
            Direction::PlusZ => 4,
            Direction::MinusZ => 5,
            Direction::OnSite => panic!("OnSite has no link slot"),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Direction::PlusX => "+x",
            Direction::MinusX => "-x",
            Direction::PlusY => "+y",
            Direction::MinusY => "-y",
            Direction::PlusZ => "+z",
            Direction::MinusZ => "-z",
            Direction::OnSite => "0",
        }
    }

    pub fn from_label(s: &str) -> Option<Direction> {
        Some(match s {
            "+x" => Direction::PlusX,
            "-x" | "\u{2212}x" => Direction::MinusX,
            "+y" => Direction::PlusY,
            "-y" | "\u{2212}y" => Direction::MinusY,
            "+z" => Direction::PlusZ,
            "-z" | "\u{2212}z" => Direction::MinusZ,
            "0" => Direction::OnSite,
            _ => return None,
        })
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Proper rotation of the cubic lattice: a signed permutation matrix with
/// determinant +1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rotation([[i64; 3]; 3]);

impl Rotation {
    pub const IDENTITY: Rotation = Rotation([[1, 0, 0], [0, 1, 0], [0, 0, 1]]);

    /// Quarter turn about the x axis; `Rx⁻¹ (x,y,z) = (x,z,-y)`.
    pub fn rx() -> Rotation {
        Rotation([[1, 0, 0], [0, 0, -1], [0, 1, 0]])
    }

    /// Quarter turn about the z axis; `Rz⁻¹ (x,y,z) = (y,-x,z)`.
    pub fn rz() -> Rotation {
        Rotation([[0, -1, 0], [1, 0, 0], [0, 0, 1]])
    }

    pub fn from_matrix(m: [[i64; 3]; 3]) -> Result<Rotation> {
        let r = Rotation(m);
        let signed_perm = m.iter().all(|row| {
            row.iter().filter(|&&v| v != 0).count() == 1 && row.iter().all(|v| v.abs() <= 1)
        }) && (0..3).all(|c| m.iter().filter(|row| row[c] != 0).count() == 1);
        if !signed_perm || r.determinant() != 1 {
            return Err(Error::pre(format!(
                "{m:?} is not a proper cubic rotation"
            )));
        }
        Ok(r)
    }

    pub fn matrix(&self) -> [[i64; 3]; 3] {
        self.0
    }

    pub fn determinant(&self) -> i64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn apply(&self, v: [i64; 3]) -> [i64; 3] {
        let m = &self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
            m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
            m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
        ]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Rotation) -> Rotation {
        let mut out = [[0i64; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = (0..3).map(|k| self.0[i][k] * other.0[k][j]).sum();
            }
        }
        Rotation(out)
    }

    /// Orthogonal, so the inverse is the transpose.
    pub fn inverse(&self) -> Rotation {
        let mut out = [[0i64; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.0[j][i];
            }
        }
        Rotation(out)
    }

    pub fn apply_direction(&self, n: Direction) -> Direction {
        Direction::from_vector(self.apply(n.vector()))
            .expect("signed permutation maps unit vectors to unit vectors")
    }

    /// Image axis of each coordinate axis, ignoring signs.
    fn axis_permutation(&self) -> [usize; 3] {
        let mut p = [0; 3];
        for (col, slot) in p.iter_mut().enumerate() {
            *slot = (0..3).find(|&row| self.0[row][col] != 0).unwrap();
        }
        p
    }

    /// Closure of `{Rx, Rz}` under composition: the 24 proper rotations of
    /// the cube, sorted.
    pub fn cubic_group() -> Vec<Rotation> {
        let gens = [Rotation::rx(), Rotation::rz()];
        let mut group = vec![Rotation::IDENTITY];
        let mut frontier = vec![Rotation::IDENTITY];
        while let Some(r) = frontier.pop() {
            for g in &gens {
                let next = g.compose(&r);
                if !group.contains(&next) {
                    group.push(next);
                    frontier.push(next);
                }
            }
        }
        group.sort();
        group
    }
}

/// Lattice isometry `s ↦ R·s + a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SymmetryOp {
    pub rotation: Rotation,
    pub translation: [i64; 3],
}

impl SymmetryOp {
    pub fn identity() -> SymmetryOp {
        SymmetryOp {
            rotation: Rotation::IDENTITY,
            translation: [0, 0, 0],
        }
    }

    pub fn translation(a: [i64; 3]) -> SymmetryOp {
        SymmetryOp {
            rotation: Rotation::IDENTITY,
            translation: a,
        }
    }

    pub fn rotation(r: Rotation) -> SymmetryOp {
        SymmetryOp {
            rotation: r,
            translation: [0, 0, 0],
        }
    }

    pub fn rx() -> SymmetryOp {
        Self::rotation(Rotation::rx())
    }

    pub fn rz() -> SymmetryOp {
        Self::rotation(Rotation::rz())
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &SymmetryOp) -> SymmetryOp {
        let ra = self.rotation.apply(other.translation);
        SymmetryOp {
            rotation: self.rotation.compose(&other.rotation),
            translation: [
                ra[0] + self.translation[0],
                ra[1] + self.translation[1],
                ra[2] + self.translation[2],
            ],
        }
    }

    /// `S⁻¹ s = R⁻¹ (s - a)`.
    pub fn inverse(&self) -> SymmetryOp {
        let rinv = self.rotation.inverse();
        let a = rinv.apply(self.translation);
        SymmetryOp {
            rotation: rinv,
            translation: [-a[0], -a[1], -a[2]],
        }
    }

    pub fn apply_site(&self, s: Site, lattice: &LatticeSpec) -> Site {
        let r = self.rotation.apply(s.coords_i64());
        lattice.site([
            r[0] + self.translation[0],
            r[1] + self.translation[1],
            r[2] + self.translation[2],
        ])
    }

    pub fn apply_direction(&self, n: Direction) -> Direction {
        self.rotation.apply_direction(n)
    }

    /// Translation reduced modulo the lattice, for comparing ops on a torus.
    pub fn reduced(&self, lattice: &LatticeSpec) -> SymmetryOp {
        let t = lattice.site(self.translation).coords_i64();
        SymmetryOp {
            rotation: self.rotation,
            translation: t,
        }
    }

    /// A rotation is a bijection of the torus only if it maps each axis onto
    /// an axis of the same length.
    pub fn check_compatible(&self, lattice: &LatticeSpec) -> Result<()> {
        let dims = lattice.dims();
        let p = self.rotation.axis_permutation();
        if (0..3).all(|i| dims[p[i]] == dims[i]) {
            Ok(())
        } else {
            Err(Error::pre(format!(
                "rotation {:?} does not map the {lattice} torus onto itself",
                self.rotation.matrix()
            )))
        }
    }

    pub fn name(&self) -> String {
        if *self == SymmetryOp::rx() {
            return "Rx".into();
        }
        if *self == SymmetryOp::rz() {
            return "Rz".into();
        }
        if self.rotation == Rotation::IDENTITY {
            let [a, b, c] = self.translation;
            return format!("T({a},{b},{c})");
        }
        format!("{:?}+{:?}", self.rotation.matrix(), self.translation)
    }
}
