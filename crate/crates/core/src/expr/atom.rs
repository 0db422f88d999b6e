//! Atoms of the term algebra: base variables, jet coordinates and opaque
//! functions of `u`.

use std::cmp::Ordering;
use std::fmt;

/// Independent direction on the Heisenberg group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dir {
    X,
    Y,
    T,
}

impl Dir {
    pub const ALL: [Dir; 3] = [Dir::X, Dir::Y, Dir::T];

    pub fn index(self) -> usize {
        match self {
            Dir::X => 0,
            Dir::Y => 1,
            Dir::T => 2,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Dir::X => 'x',
            Dir::Y => 'y',
            Dir::T => 't',
        }
    }

    pub fn from_letter(c: char) -> Option<Dir> {
        match c {
            'x' => Some(Dir::X),
            'y' => Some(Dir::Y),
            't' => Some(Dir::T),
            _ => None,
        }
    }
}

impl fmt::Display for Dir {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Dependent symbol carried by jet coordinates.
///
/// `Beta` is the free function of `(x, y, t)` that parametrises the
/// infinite family of symmetries `W_β = β ∂_u` in the linear cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dependent {
    U,
    Beta,
}

impl Dependent {
    pub fn symbol(self) -> &'static str {
        match self {
            Dependent::U => "u",
            Dependent::Beta => "b",
        }
    }
}

/// An unordered multi-index over `{x, y, t}`, stored as counts so that
/// `u_xt` and `u_tx` are the same coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct MultiIndex {
    counts: [u8; 3],
}

impl MultiIndex {
    pub const EMPTY: MultiIndex = MultiIndex { counts: [0; 3] };

    pub fn from_counts(counts: [u8; 3]) -> Self {
        MultiIndex { counts }
    }

    pub fn from_dirs<I: IntoIterator<Item = Dir>>(dirs: I) -> Self {
        let mut counts = [0u8; 3];
        for d in dirs {
            counts[d.index()] += 1;
        }
        MultiIndex { counts }
    }

    /// Parses a suffix such as `"xt"`; `None` on any other character.
    pub fn parse(s: &str) -> Option<Self> {
        let mut dirs = Vec::with_capacity(s.len());
        for c in s.chars() {
            dirs.push(Dir::from_letter(c)?);
        }
        Some(Self::from_dirs(dirs))
    }

    pub fn order(&self) -> usize {
        self.counts.iter().map(|&c| c as usize).sum()
    }

    pub fn count(&self, d: Dir) -> u8 {
        self.counts[d.index()]
    }

    pub fn counts(&self) -> [u8; 3] {
        self.counts
    }

    pub fn with(&self, d: Dir) -> Self {
        let mut counts = self.counts;
        counts[d.index()] += 1;
        MultiIndex { counts }
    }

    pub fn without(&self, d: Dir) -> Option<Self> {
        let mut counts = self.counts;
        if counts[d.index()] == 0 {
            return None;
        }
        counts[d.index()] -= 1;
        Some(MultiIndex { counts })
    }

    /// The directions in sorted order, `x` before `y` before `t`.
    pub fn dirs(&self) -> Vec<Dir> {
        let mut out = Vec::with_capacity(self.order());
        for d in Dir::ALL {
            for _ in 0..self.count(d) {
                out.push(d);
            }
        }
        out
    }

    /// All multi-indices of exactly the given order, in canonical order.
    pub fn all_of_order(order: usize) -> Vec<Self> {
        let mut out = Vec::new();
        for cx in (0..=order).rev() {
            for cy in (0..=order - cx).rev() {
                let ct = order - cx - cy;
                out.push(MultiIndex::from_counts([cx as u8, cy as u8, ct as u8]));
            }
        }
        out
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        // graded, then x-heavy first: u < u_x < u_y < u_t < u_xx < u_xy < ...
        self.order()
            .cmp(&other.order())
            .then_with(|| other.counts.cmp(&self.counts))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in self.dirs() {
            write!(f, "{}", d.letter())?;
        }
        Ok(())
    }
}

/// Opaque functions of `u`.
///
/// `Antiderivative` is `F(u)`, `Derivative(k)` is `f⁽ᵏ⁾(u)` with `f = F'`,
/// `Exp` is `e^u` and `Log` is `ln u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OpaqueFn {
    Antiderivative,
    Derivative(u32),
    Exp,
    Log,
}

/// A generator of the term algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Base(Dir),
    Jet(Dependent, MultiIndex),
    Opaque(OpaqueFn),
}

impl Atom {
    pub const X: Atom = Atom::Base(Dir::X);
    pub const Y: Atom = Atom::Base(Dir::Y);
    pub const T: Atom = Atom::Base(Dir::T);
    pub const U: Atom = Atom::Jet(Dependent::U, MultiIndex::EMPTY);
    pub const BETA: Atom = Atom::Jet(Dependent::Beta, MultiIndex::EMPTY);

    pub fn base(d: Dir) -> Atom {
        Atom::Base(d)
    }

    /// `u_J` for a suffix such as `"xt"`. Panics on a malformed suffix.
    pub fn u_jet(suffix: &str) -> Atom {
        Atom::Jet(
            Dependent::U,
            MultiIndex::parse(suffix).expect("jet suffix over {x,y,t}"),
        )
    }

    /// `β_J` for a suffix such as `"xt"`. Panics on a malformed suffix.
    pub fn beta_jet(suffix: &str) -> Atom {
        Atom::Jet(
            Dependent::Beta,
            MultiIndex::parse(suffix).expect("jet suffix over {x,y,t}"),
        )
    }

    pub fn jet(dep: Dependent, idx: MultiIndex) -> Atom {
        Atom::Jet(dep, idx)
    }

    pub fn is_u(&self) -> bool {
        *self == Atom::U
    }

    /// Order of a jet coordinate; zero for every other atom.
    pub fn jet_order(&self) -> usize {
        match self {
            Atom::Jet(_, idx) => idx.order(),
            _ => 0,
        }
    }

    pub fn dependent(&self) -> Option<Dependent> {
        match self {
            Atom::Jet(dep, _) => Some(*dep),
            _ => None,
        }
    }

    /// Name used by the text grammar (`u_xt`, `b_x`, `F(u)`, `f2(u)`, ...).
    pub fn text_name(&self) -> String {
        match self {
            Atom::Base(d) => d.letter().to_string(),
            Atom::Jet(dep, idx) if idx.order() == 0 => dep.symbol().to_string(),
            Atom::Jet(dep, idx) => format!("{}_{}", dep.symbol(), idx),
            Atom::Opaque(OpaqueFn::Antiderivative) => "F(u)".to_string(),
            Atom::Opaque(OpaqueFn::Derivative(0)) => "f(u)".to_string(),
            Atom::Opaque(OpaqueFn::Derivative(k)) => format!("f{k}(u)"),
            Atom::Opaque(OpaqueFn::Exp) => "E(u)".to_string(),
            Atom::Opaque(OpaqueFn::Log) => "ln(u)".to_string(),
        }
    }

    pub fn latex_name(&self) -> String {
        match self {
            Atom::Base(d) => d.letter().to_string(),
            Atom::Jet(Dependent::U, idx) if idx.order() == 0 => "u".to_string(),
            Atom::Jet(Dependent::Beta, idx) if idx.order() == 0 => "\\beta".to_string(),
            Atom::Jet(Dependent::U, idx) => format!("u_{{{idx}}}"),
            Atom::Jet(Dependent::Beta, idx) => format!("\\beta_{{{idx}}}"),
            Atom::Opaque(OpaqueFn::Antiderivative) => "F(u)".to_string(),
            Atom::Opaque(OpaqueFn::Derivative(0)) => "f(u)".to_string(),
            Atom::Opaque(OpaqueFn::Derivative(k)) => format!("f^{{({k})}}(u)"),
            Atom::Opaque(OpaqueFn::Exp) => "e^{u}".to_string(),
            Atom::Opaque(OpaqueFn::Log) => "\\ln u".to_string(),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text_name())
    }
}
