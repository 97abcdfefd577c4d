//! Named driving measures.
//!
//! Permutations act on card positions: σ sends the card at position p to
//! position σ(p), and a step from g lands on σg. Positions are 1-based in
//! cycle notation below and 0-based in code.
//!
//! * `simple-circle:n` on Z_n: ½ at ±1.
//! * `cube-nn:n` on Z₂ⁿ: 1/(n+1) at e and at each unit vector e_i.
//! * `cube-loops:n` on Z₂ⁿ: ½ at e and 1/(2n) at each e_i.
//! * `random-transpositions:n` on S_n: 1/n at e and 2/n² at each transposition.
//! * `top-to-random:n` on S_n: 1/n on each cycle (1, m, m−1, …, 2), m = 1..n,
//!   where m = 1 is the identity.
//! * `random-to-top:n`: the inverse cycles (1, 2, …, m), so ν̌ of the above.
//! * `heisenberg-gen:n` on H₃(n): 1/5 at (±1,0,0), (0,0,±1) and (0,0,0).
//! * `urban-step:n:i` on S_n: uniform on (i,i), (i,i+1), …, (i,n), with (i,i) = e.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::group::{Group, GroupKind};
use crate::measure::{Measure, MeasureKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WalkName {
    SimpleCircle,
    CubeNn,
    CubeLoops,
    RandomTranspositions,
    RandomToTop,
    TopToRandom,
    HeisenbergGen,
    UrbanStep(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WalkSpec {
    pub name: WalkName,
    pub n: usize,
}

impl WalkName {
    pub fn as_str(&self) -> &'static str {
        match self {
            WalkName::SimpleCircle => "simple-circle",
            WalkName::CubeNn => "cube-nn",
            WalkName::CubeLoops => "cube-loops",
            WalkName::RandomTranspositions => "random-transpositions",
            WalkName::RandomToTop => "random-to-top",
            WalkName::TopToRandom => "top-to-random",
            WalkName::HeisenbergGen => "heisenberg-gen",
            WalkName::UrbanStep(_) => "urban-step",
        }
    }
}

impl fmt::Display for WalkSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.name {
            WalkName::UrbanStep(i) => write!(f, "urban-step:{}:{}", self.n, i),
            name => write!(f, "{}:{}", name.as_str(), self.n),
        }
    }
}

impl FromStr for WalkSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(s.to_string());
        let mut parts = s.trim().split(':');
        let name = parts.next().ok_or_else(bad)?;
        let n: usize = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let extra = parts.next();
        let name = match (name, extra) {
            ("simple-circle", None) => WalkName::SimpleCircle,
            ("cube-nn", None) => WalkName::CubeNn,
            ("cube-loops", None) => WalkName::CubeLoops,
            ("random-transpositions", None) => WalkName::RandomTranspositions,
            ("random-to-top", None) => WalkName::RandomToTop,
            ("top-to-random", None) => WalkName::TopToRandom,
            ("heisenberg-gen", None) => WalkName::HeisenbergGen,
            ("urban-step", Some(i)) => WalkName::UrbanStep(i.parse().map_err(|_| bad())?),
            _ => return Err(bad()),
        };
        if parts.next().is_some() {
            return Err(bad());
        }
        let spec = WalkSpec { name, n };
        spec.validate()?;
        Ok(spec)
    }
}

impl WalkSpec {
    pub fn new(name: WalkName, n: usize) -> Result<Self> {
        let spec = WalkSpec { name, n };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        let ok = match self.name {
            WalkName::SimpleCircle => self.n >= 2,
            WalkName::CubeNn | WalkName::CubeLoops => self.n >= 1,
            WalkName::HeisenbergGen => self.n >= 2,
            WalkName::UrbanStep(i) => self.n >= 2 && (1..=self.n).contains(&i),
            _ => self.n >= 2,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Unsupported(format!("walk {self}")))
        }
    }

    pub fn group_kind(&self) -> GroupKind {
        match self.name {
            WalkName::SimpleCircle => GroupKind::Cyclic(self.n),
            WalkName::CubeNn | WalkName::CubeLoops => GroupKind::Cube(self.n),
            WalkName::HeisenbergGen => GroupKind::Heisenberg(self.n),
            _ => GroupKind::Symmetric(self.n),
        }
    }

    pub fn group(&self) -> Result<Arc<Group>> {
        Ok(Arc::new(Group::new(self.group_kind())?))
    }

    /// Builds the group and the driving measure together.
    pub fn build(&self) -> Result<(Arc<Group>, Measure)> {
        let g = self.group()?;
        let nu = driving_measure(self, g.clone())?;
        Ok((g, nu))
    }
}

/// Exact weights as `(element, mass)` pairs; repeated elements are merged.
pub fn driving_rational(spec: &WalkSpec, group: &Group) -> Result<Vec<(usize, Ratio<i64>)>> {
    if group.kind() != spec.group_kind() {
        return Err(Error::InvalidArgument(format!(
            "walk {spec} does not live on {}",
            group.descriptor()
        )));
    }
    let n = spec.n;
    let r = |p: usize, q: usize| Ratio::new(p as i64, q as i64);
    let mut pairs: Vec<(usize, Ratio<i64>)> = Vec::new();
    let perm = |p: &[u8]| group.permutation_index(p).unwrap();
    let transposition = |i: usize, j: usize| {
        let mut p: Vec<u8> = (0..n as u8).collect();
        p.swap(i, j);
        perm(&p)
    };
    match spec.name {
        WalkName::SimpleCircle => {
            pairs.push((1, r(1, 2)));
            pairs.push((n - 1, r(1, 2)));
        }
        WalkName::CubeNn => {
            pairs.push((0, r(1, n + 1)));
            for i in 0..n {
                pairs.push((1 << i, r(1, n + 1)));
            }
        }
        WalkName::CubeLoops => {
            pairs.push((0, r(1, 2)));
            for i in 0..n {
                pairs.push((1 << i, r(1, 2 * n)));
            }
        }
        WalkName::RandomTranspositions => {
            pairs.push((0, r(1, n)));
            for i in 0..n {
                for j in i + 1..n {
                    pairs.push((transposition(i, j), r(2, n * n)));
                }
            }
        }
        WalkName::TopToRandom | WalkName::RandomToTop => {
            for m in 1..=n {
                let mut p: Vec<u8> = (0..n as u8).collect();
                p[0] = (m - 1) as u8;
                for (i, x) in p.iter_mut().enumerate().take(m).skip(1) {
                    *x = (i - 1) as u8;
                }
                let mut s = perm(&p);
                if spec.name == WalkName::RandomToTop {
                    s = group.inv(s);
                }
                pairs.push((s, r(1, n)));
            }
        }
        WalkName::HeisenbergGen => {
            for t in [[1, 0, 0], [n - 1, 0, 0], [0, 0, 1], [0, 0, n - 1], [0, 0, 0]] {
                pairs.push((group.heisenberg_index(t), r(1, 5)));
            }
        }
        WalkName::UrbanStep(i) => {
            let mass = r(1, n - i + 1);
            pairs.push((0, mass));
            for j in i + 1..=n {
                pairs.push((transposition(i - 1, j - 1), mass));
            }
        }
    }
    pairs.sort_by_key(|&(g, _)| g);
    let mut merged: Vec<(usize, Ratio<i64>)> = Vec::with_capacity(pairs.len());
    for (g, w) in pairs {
        match merged.last_mut() {
            Some((h, v)) if *h == g => *v += w,
            _ => merged.push((g, w)),
        }
    }
    debug_assert_eq!(
        merged.iter().map(|(_, w)| *w).sum::<Ratio<i64>>(),
        Ratio::from_integer(1)
    );
    Ok(merged)
}

pub fn driving_measure(spec: &WalkSpec, group: Arc<Group>) -> Result<Measure> {
    let pairs = driving_rational(spec, &group)?;
    let mut w = vec![0.0; group.order()];
    for (g, x) in pairs {
        w[g] = *x.numer() as f64 / *x.denom() as f64;
    }
    Measure::new(group, w, MeasureKind::Probability)
}

/// Hamming weight of a cube element.
pub fn weight(group: &Group, s: usize) -> Result<usize> {
    match group.kind() {
        GroupKind::Cube(_) => {
            group.element(s)?;
            Ok(s.count_ones() as usize)
        }
        _ => Err(Error::InvalidArgument(format!(
            "weight is defined on cubes, not {}",
            group.descriptor()
        ))),
    }
}
