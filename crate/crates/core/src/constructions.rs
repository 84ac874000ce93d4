//! Graph families: `X_b(m, n, a, b, l)`, the two `n = 8` exceptional
//! families, Moebius ladders and prisms, and honeycomb toroidal graphs.
//! Also the parameter validator and the vertex-transitivity classifier.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph_core::{EdgeClass, FactorGraph, GraphError, Grid};

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error("invalid parameters: {}", join(.0))]
    Params(Vec<Violation>),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn join(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// One failed condition on a parameter tuple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Violation {
    MTooSmall,
    NNotPositive,
    NNotMultipleOf4,
    NTooSmall,
    BNotMultipleOf4,
    B0OutOfRange,
    B0NotCoprime,
    BB0Not4,
    ANot1Mod4,
    BA0PlusANot1,
    LNot2Or3Mod4,
    MNotMultipleOf3,
    HtgNOdd,
    HtgParity,
    HtgMTooSmall,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Violation::MTooSmall => "m must be at least 3",
            Violation::NNotPositive => "n must be positive",
            Violation::NNotMultipleOf4 => "n must be divisible by 4",
            Violation::NTooSmall => "n must be at least 8",
            Violation::BNotMultipleOf4 => "b must be divisible by 4",
            Violation::B0OutOfRange => "b0 = b/4 must satisfy 1 <= b0 < n/4",
            Violation::B0NotCoprime => "gcd(n/4, b/4) must be 1",
            Violation::BB0Not4 => "b*b0 must be 4 mod n",
            Violation::ANot1Mod4 => "a must be 1 mod 4",
            Violation::BA0PlusANot1 => "b*a0 + a must be 1 mod n",
            Violation::LNot2Or3Mod4 => "l must be 2 or 3 mod 4",
            Violation::MNotMultipleOf3 => "m must be divisible by 3",
            Violation::HtgNOdd => "HTG needs n even",
            Violation::HtgParity => "HTG needs m and l of equal parity",
            Violation::HtgMTooSmall => "HTG needs m >= 2",
        };
        f.write_str(s)
    }
}

/// The tuple `(m, n, a, b, l)` with `a, b, l` reduced into `Z_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct XbParams {
    pub m: u32,
    pub n: u32,
    pub a: u32,
    pub b: u32,
    pub l: u32,
}

impl XbParams {
    /// Accepts arbitrary integers and reduces `a`, `b`, `l` mod `n`.
    pub fn new(m: i64, n: i64, a: i64, b: i64, l: i64) -> Result<Self, ConstructionError> {
        if n <= 0 {
            return Err(ConstructionError::Params(vec![Violation::NNotPositive]));
        }
        if m < 3 {
            return Err(ConstructionError::Params(vec![Violation::MTooSmall]));
        }
        Ok(XbParams {
            m: m as u32,
            n: n as u32,
            a: a.rem_euclid(n) as u32,
            b: b.rem_euclid(n) as u32,
            l: l.rem_euclid(n) as u32,
        })
    }

    pub fn grid(&self) -> Grid {
        Grid::new(self.m, self.n)
    }

    pub fn n0(&self) -> u32 {
        self.n / 4
    }

    pub fn b0(&self) -> u32 {
        self.b / 4
    }

    pub fn a0(&self) -> u32 {
        (self.a + self.n - 1) % self.n / 4
    }

    pub fn l0(&self) -> u32 {
        self.l / 4
    }

    pub fn l_even(&self) -> bool {
        self.l.is_multiple_of(2)
    }

    pub fn m_even(&self) -> bool {
        self.m.is_multiple_of(2)
    }

    /// Reduce into `Z_n`.
    pub fn zn(&self, x: i64) -> u32 {
        x.rem_euclid(self.n as i64) as u32
    }
}

impl fmt::Display for XbParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "X_b({},{},{},{},{})",
            self.m, self.n, self.a, self.b, self.l
        )
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Every condition the construction places on `(m, n, a, b, l)` that fails.
pub fn validate_xb(p: &XbParams) -> Vec<Violation> {
    let mut out = Vec::new();
    if p.m < 3 {
        out.push(Violation::MTooSmall);
    }
    if !p.n.is_multiple_of(4) {
        out.push(Violation::NNotMultipleOf4);
    }
    if p.n < 8 {
        out.push(Violation::NTooSmall);
    }
    if !out.is_empty() {
        return out;
    }
    let n = p.n as u64;
    let (n0, b0) = (p.n0(), p.b0());
    if !p.b.is_multiple_of(4) {
        out.push(Violation::BNotMultipleOf4);
    } else {
        if !(1..n0).contains(&b0) {
            out.push(Violation::B0OutOfRange);
        } else if gcd(n0, b0) != 1 {
            out.push(Violation::B0NotCoprime);
        }
        if (p.b as u64 * b0 as u64) % n != 4 % n {
            out.push(Violation::BB0Not4);
        }
    }
    if p.a % 4 != 1 {
        out.push(Violation::ANot1Mod4);
    } else if (p.b as u64 * p.a0() as u64 + p.a as u64) % n != 1 {
        out.push(Violation::BA0PlusANot1);
    }
    if !matches!(p.l % 4, 2 | 3) {
        out.push(Violation::LNot2Or3Mod4);
    }
    out
}

/// `X_b(m, n, a, b, l)`: rings, the links between consecutive rings and the
/// jumps from `V_{m-1}` back to `V_0` (shape chosen by the parity of `l`).
pub fn build_xb(p: &XbParams) -> Result<FactorGraph, ConstructionError> {
    let violations = validate_xb(p);
    if !violations.is_empty() {
        return Err(ConstructionError::Params(violations));
    }
    let grid = p.grid();
    let (m, a, b, l) = (p.m as i64, p.a as i64, p.b as i64, p.l as i64);
    let mut edges = Vec::with_capacity(grid.order() / 2);
    for j0 in 0..p.n0() as i64 {
        for d in 0..2 {
            for i in 0..m - 1 {
                edges.push((
                    grid.v(i, 2 * i + 4 * j0 + d),
                    grid.v(i + 1, 2 * i + b * j0 + d * a),
                    EdgeClass::Link,
                ));
            }
            let tail = grid.v(m - 1, 2 * (m - 1) + 4 * j0 + d);
            let head = if p.l_even() {
                grid.v(0, l + b * j0 + d * a)
            } else {
                grid.v(0, l - b * j0 - d * a)
            };
            edges.push((tail, head, EdgeClass::Jump));
        }
    }
    Ok(FactorGraph::from_outside_edges(grid, p.to_string(), edges)?)
}

/// Which of the two `n = 8` exceptional families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum N8Kind {
    /// `(a, b) = (4, 1)`
    Xb1,
    /// `(a, b) = (1, 5)`
    Xb2,
}

pub fn build_xb1(m: u32) -> Result<FactorGraph, ConstructionError> {
    build_n8(N8Kind::Xb1, m)
}

pub fn build_xb2(m: u32) -> Result<FactorGraph, ConstructionError> {
    build_n8(N8Kind::Xb2, m)
}

pub fn build_n8(kind: N8Kind, m: u32) -> Result<FactorGraph, ConstructionError> {
    if m < 3 {
        return Err(ConstructionError::Params(vec![Violation::MTooSmall]));
    }
    if !m.is_multiple_of(3) {
        return Err(ConstructionError::Params(vec![Violation::MNotMultipleOf3]));
    }
    let grid = Grid::new(m, 8);
    let m = m as i64;
    let mut edges = Vec::with_capacity(grid.order() / 2);
    for d in 0..2 {
        for i in 0..m - 1 {
            let (first, second) = match kind {
                N8Kind::Xb1 => (2 * i + 4 * d, 2 * i + 1 + 4 * d),
                N8Kind::Xb2 => (2 * i + d, 2 * i + 5 - d),
            };
            edges.push((grid.v(i, 2 * i + d), grid.v(i + 1, first), EdgeClass::Link));
            edges.push((
                grid.v(i, 2 * i + 4 + d),
                grid.v(i + 1, second),
                EdgeClass::Link,
            ));
        }
        let last = m - 1;
        let (first, second) = match kind {
            N8Kind::Xb1 => (6 + 4 * d, 7 + 4 * d),
            N8Kind::Xb2 => (6 + d, 3 - d),
        };
        edges.push((
            grid.v(last, 2 * last + d),
            grid.v(0, first),
            EdgeClass::Jump,
        ));
        edges.push((
            grid.v(last, 2 * last + 4 + d),
            grid.v(0, second),
            EdgeClass::Jump,
        ));
    }
    let label = match kind {
        N8Kind::Xb1 => format!("X_b^1({m})"),
        N8Kind::Xb2 => format!("X_b^2({m})"),
    };
    Ok(FactorGraph::from_outside_edges(grid, label, edges)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LadderKind {
    Mobius,
    Prism,
}

/// The order-`4m` Moebius ladder or prism, drawn as `m` quadrilaterals.
///
/// Links are `v_{i,2i+d} ~ v_{i+1,2i+d}`; the closing pair either keeps
/// (`v_{m-1,2(m-1)+d} ~ v_{0,2+d}`) or crosses (`~ v_{0,3-d}`). Which of
/// the two closings yields the prism depends on the parity of `m`.
pub fn build_mobius_or_prism(m: u32, kind: LadderKind) -> Result<FactorGraph, ConstructionError> {
    if m < 3 {
        return Err(ConstructionError::Params(vec![Violation::MTooSmall]));
    }
    let grid = Grid::new(m, 4);
    let mi = m as i64;
    let straight = (kind == LadderKind::Prism) == m.is_multiple_of(2);
    let mut edges = Vec::with_capacity(2 * m as usize);
    for d in 0..2 {
        for i in 0..mi - 1 {
            edges.push((
                grid.v(i, 2 * i + d),
                grid.v(i + 1, 2 * i + d),
                EdgeClass::Link,
            ));
        }
        let head = if straight { 2 + d } else { 3 - d };
        edges.push((
            grid.v(mi - 1, 2 * (mi - 1) + d),
            grid.v(0, head),
            EdgeClass::Jump,
        ));
    }
    let label = match kind {
        LadderKind::Mobius => format!("Mobius({})", 4 * m),
        LadderKind::Prism => format!("Prism({})", 4 * m),
    };
    Ok(FactorGraph::from_outside_edges(grid, label, edges)?)
}

/// Honeycomb toroidal graph `HTG(m, n, l)`.
///
/// Columns `{(i, j) : j in Z_n}` are `n`-cycles; `(i, j) ~ (i+1, j)` for
/// `0 <= i <= m-2` when `i + j` is even; `(m-1, j) ~ (0, j + l)` when
/// `m - 1 + j` is even. This needs `n` even and `m = l (mod 2)`.
pub fn build_htg(m: u32, n: u32, l: i64) -> Result<FactorGraph, ConstructionError> {
    let mut bad = Vec::new();
    if m < 2 {
        bad.push(Violation::HtgMTooSmall);
    }
    if !n.is_multiple_of(2) || n < 4 {
        bad.push(Violation::HtgNOdd);
    }
    if (m as i64 - l).rem_euclid(2) != 0 {
        bad.push(Violation::HtgParity);
    }
    if !bad.is_empty() {
        return Err(ConstructionError::Params(bad));
    }
    let grid = Grid::new(m, n);
    let (mi, ni) = (m as i64, n as i64);
    let mut edges = Vec::with_capacity(grid.order() / 2);
    for j in 0..ni {
        for i in 0..mi - 1 {
            if (i + j) % 2 == 0 {
                edges.push((grid.v(i, j), grid.v(i + 1, j), EdgeClass::Link));
            }
        }
        if (mi - 1 + j) % 2 == 0 {
            edges.push((grid.v(mi - 1, j), grid.v(0, j + l), EdgeClass::Jump));
        }
    }
    Ok(FactorGraph::from_outside_edges(
        grid,
        format!("HTG({m},{n},{})", l.rem_euclid(ni)),
        edges,
    )?)
}

/// Which item of the classification a tuple falls under.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseKind {
    N4MobiusOrPrism,
    N8Xb1,
    N8Xb2,
    N8B4,
    OddOdd,
    OddEven,
    EvenEven,
    Invalid,
}

impl CaseKind {
    pub fn is_valid(self) -> bool {
        self != CaseKind::Invalid
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CaseKind::N4MobiusOrPrism => "N4_MobiusOrPrism",
            CaseKind::N8Xb1 => "N8_Xb1",
            CaseKind::N8Xb2 => "N8_Xb2",
            CaseKind::N8B4 => "N8_b4",
            CaseKind::OddOdd => "OddOdd",
            CaseKind::OddEven => "OddEven",
            CaseKind::EvenEven => "EvenEven",
            CaseKind::Invalid => "Invalid",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            CaseKind::N4MobiusOrPrism,
            CaseKind::N8Xb1,
            CaseKind::N8Xb2,
            CaseKind::N8B4,
            CaseKind::OddOdd,
            CaseKind::OddEven,
            CaseKind::EvenEven,
            CaseKind::Invalid,
        ]
        .into_iter()
        .find(|c| c.as_str().eq_ignore_ascii_case(s))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremCase {
    pub case: CaseKind,
    /// The matched sub-item, or the first failed condition.
    pub detail: String,
}

impl TheoremCase {
    fn ok(case: CaseKind, detail: impl Into<String>) -> Self {
        TheoremCase {
            case,
            detail: detail.into(),
        }
    }

    fn invalid(detail: impl Into<String>) -> Self {
        TheoremCase {
            case: CaseKind::Invalid,
            detail: detail.into(),
        }
    }
}

/// Matches `(m, n, a, b, l)` against the classification of graphs admitting
/// a vertex-transitive group preserving the ring 2-factor.
///
/// `n = 8` tuples with `(a, b)` in `{(4, 1), (1, 5)}` denote the exceptional
/// families; `n = 4` tuples denote the Moebius ladder (`l = 2`, `m` odd) or
/// prism (`l = 3`, `m` odd) in the ring drawing with `a = 1`, `b = 0`.
pub fn classify_theorem_case(m: i64, n: i64, a: i64, b: i64, l: i64) -> TheoremCase {
    if m < 3 {
        return TheoremCase::invalid("m must be at least 3");
    }
    if n <= 0 || n % 4 != 0 {
        return TheoremCase::invalid("n must be a positive multiple of 4");
    }
    let (a, b, l) = (a.rem_euclid(n), b.rem_euclid(n), l.rem_euclid(n));
    if n == 4 {
        return if a == 1 && b == 0 && (l == 2 || l == 3) {
            TheoremCase::ok(CaseKind::N4MobiusOrPrism, "n = 4: Moebius ladder or prism")
        } else {
            TheoremCase::invalid("n = 4 needs a = 1, b = 0 and l in {2, 3}")
        };
    }
    if n == 8 && (a, b) == (4, 1) || n == 8 && (a, b) == (1, 5) {
        let kind = if a == 4 {
            CaseKind::N8Xb1
        } else {
            CaseKind::N8Xb2
        };
        if l != 6 {
            return TheoremCase::invalid("n = 8 with (a,b) in {(4,1),(1,5)} needs l = 6");
        }
        if m % 3 != 0 {
            return TheoremCase::invalid("m must be divisible by 3");
        }
        return TheoremCase::ok(kind, "n = 8, 3 | m, exceptional family");
    }
    let p = match XbParams::new(m, n, a, b, l) {
        Ok(p) => p,
        Err(e) => return TheoremCase::invalid(e.to_string()),
    };
    if let Some(first) = validate_xb(&p).first() {
        return TheoremCase::invalid(first.to_string());
    }
    let (m_odd, l_odd) = (m % 2 == 1, l % 2 == 1);
    if n == 8 {
        // b = 4, a in {1, 5} after validation
        return if m_odd {
            if a == 5 && l_odd {
                TheoremCase::ok(CaseKind::N8B4, "n = 8, m odd, a = 5, l in {3, 7}")
            } else {
                TheoremCase::invalid("n = 8 with m odd needs a = 5 and l in {3, 7}")
            }
        } else if !l_odd {
            TheoremCase::ok(CaseKind::N8B4, "n = 8, m even, a in {1, 5}, l in {2, 6}")
        } else {
            TheoremCase::invalid("n = 8 with m even needs l in {2, 6}")
        };
    }
    match (m_odd, l_odd) {
        (true, true) => {
            if p.b != p.n - 4 {
                TheoremCase::invalid("m, l odd needs b = n - 4")
            } else if p.a != p.zn(2 * l - 1) {
                TheoremCase::invalid("m, l odd needs a = 2l - 1")
            } else {
                TheoremCase::ok(CaseKind::OddOdd, "m, l odd, b = n - 4, a = 2l - 1")
            }
        }
        (true, false) => {
            let n0 = n / 4;
            if a != 1 || b != 4 {
                TheoremCase::invalid("m odd, l even needs a = 1 and b = 4")
            } else if n0 % 2 == 0 {
                TheoremCase::invalid("m odd, l even needs n/4 odd")
            } else if l != (2 * n0 + 2 * m - 2).rem_euclid(n) {
                TheoremCase::invalid("m odd, l even needs l = 2(n/4) + 2m - 2")
            } else {
                TheoremCase::ok(
                    CaseKind::OddEven,
                    "m odd, l even, a = 1, b = 4, l = n/2 + 2m - 2",
                )
            }
        }
        (false, false) => {
            if !even_even_conditions(&p) {
                TheoremCase::invalid("m, l even needs (l+2)(b0-1) = 0 and 2(l+2) = 2m(b0+1)")
            } else {
                TheoremCase::ok(
                    CaseKind::EvenEven,
                    "m, l even, (l+2)(b0-1) = 0, 2(l+2) = 2m(b0+1)",
                )
            }
        }
        (false, true) => TheoremCase::invalid("m even with l odd admits no such group"),
    }
}

fn even_even_conditions(p: &XbParams) -> bool {
    let (l, b0, m) = (p.l as i64, p.b0() as i64, p.m as i64);
    p.zn((l + 2) * (b0 - 1)) == 0 && p.zn(2 * (l + 2)) == p.zn(2 * m * (b0 + 1))
}

/// Condition under which the formula map `gamma` is an automorphism.
pub fn gamma_condition(p: &XbParams) -> bool {
    let l = p.l as i64;
    if p.l_even() {
        p.zn((l + 2) * (p.b0() as i64 - 1)) == 0
    } else {
        p.b == p.zn(-4) && p.a == p.zn(2 * l - 1)
    }
}

/// Condition under which the formula map `alpha` is an automorphism, given
/// that [`gamma_condition`] holds.
pub fn alpha_condition(p: &XbParams) -> bool {
    let (m, l) = (p.m as i64, p.l as i64);
    match (p.m_even(), p.l_even()) {
        (false, false) => p.b == p.zn(-4) && p.a == p.zn(2 * l - 1),
        (false, true) => {
            let n0 = p.n0() as i64;
            p.a == 1 && p.b == 4 && n0 % 2 == 1 && n0 >= 3 && p.l == p.zn(2 * n0 + 2 * m - 2)
        }
        (true, true) => {
            let m0 = m / 2;
            p.zn(2 * (l + 2)) == p.zn(m0 * (p.b as i64 + 4))
        }
        (true, false) => false,
    }
}
