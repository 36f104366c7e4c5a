//! Dimensions of `S_{2k}(N)` and of its newspace.
//!
//! Both formulas are assembled as an integer numerator over 12; a nonzero
//! remainder or a negative total is an internal-consistency error.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numthy::{
    Factorization, MultiplicativeFunction, NumthyError, Rational, BETA, MOBIUS, NU2, NU2_NEW,
    NU3, NU3_NEW, NU_INF, NU_INF_NEW, PSI, PSI_NEW,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DimensionError {
    #[error("weight parameter k must be at least 1")]
    ZeroWeight,
    #[error("weight 2k must be a positive even integer, got {0}")]
    OddWeight(u64),
    #[error("dimension numerator {numerator}/12 at N={level}, k={k} is not an integer")]
    NonIntegral { level: u64, k: u64, numerator: i128 },
    #[error("dimension at N={level}, k={k} came out negative ({value})")]
    Negative { level: u64, k: u64, value: i128 },
    #[error(transparent)]
    Numthy(#[from] NumthyError),
}

/// Full cusp-form space or its new subspace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceKind {
    Full,
    New,
}

impl SpaceKind {
    pub const ALL: [SpaceKind; 2] = [SpaceKind::Full, SpaceKind::New];

    pub fn as_str(self) -> &'static str {
        match self {
            SpaceKind::Full => "full",
            SpaceKind::New => "new",
        }
    }

    /// The function playing the role of `psi` in the leading term.
    pub fn leading(self) -> &'static MultiplicativeFunction {
        match self {
            SpaceKind::Full => &PSI,
            SpaceKind::New => &PSI_NEW,
        }
    }

    /// `[leading, cusps, order-2, order-3, weight-2 correction]`.
    pub fn functions(self) -> [&'static MultiplicativeFunction; 5] {
        match self {
            SpaceKind::Full => [&PSI, &NU_INF, &NU2, &NU3, &UNIT],
            SpaceKind::New => [&PSI_NEW, &NU_INF_NEW, &NU2_NEW, &NU3_NEW, &MOBIUS],
        }
    }
}

const UNIT: MultiplicativeFunction = MultiplicativeFunction::integer("one", |_, _| 1);

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SpaceKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "full" => Ok(SpaceKind::Full),
            "new" => Ok(SpaceKind::New),
            _ => Err(format!("unknown space kind {s:?} (expected full or new)")),
        }
    }
}

/// The weight parameter `k`; forms have weight `2k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight(u64);

impl Weight {
    pub fn new(k: u64) -> Result<Self, DimensionError> {
        if k == 0 {
            return Err(DimensionError::ZeroWeight);
        }
        Ok(Weight(k))
    }

    /// From the form weight `2k`.
    pub fn from_weight2k(w: u64) -> Result<Self, DimensionError> {
        if w == 0 || w % 2 == 1 {
            return Err(DimensionError::OddWeight(w));
        }
        Ok(Weight(w / 2))
    }

    pub fn k(self) -> u64 {
        self.0
    }

    pub fn is_one(self) -> bool {
        self.0 == 1
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `c_2(k) = floor(2k/4) - (2k-1)/4`, which is `-1/4` for odd `k` and `+1/4` for even `k`.
pub fn c2(k: Weight) -> Rational {
    let k = k.0 as i64;
    rat(2 * k / 4, 1) - rat(2 * k - 1, 4)
}

/// `c_3(k) = floor(2k/3) - (2k-1)/3`.
pub fn c3(k: Weight) -> Rational {
    let k = k.0 as i64;
    rat(2 * k / 3, 1) - rat(2 * k - 1, 3)
}

/// `12 c_2(k)`.
pub(crate) fn twelve_c2(k: Weight) -> i128 {
    if k.0 % 2 == 1 {
        -3
    } else {
        3
    }
}

/// `12 c_3(k)`.
pub(crate) fn twelve_c3(k: Weight) -> i128 {
    match k.0 % 3 {
        1 => -4,
        2 => 0,
        _ => 4,
    }
}

/// The multiplicative-function values a dimension formula needs at one level.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalTerms {
    pub leading: i128,
    pub cusps: i128,
    pub order2: i128,
    pub order3: i128,
    /// Coefficient of the weight-2 correction: 1 for the full space, `mu(N)` for the newspace.
    pub weight2: i128,
}

impl LocalTerms {
    pub fn at(kind: SpaceKind, n: &Factorization) -> Result<Self, NumthyError> {
        let [a, b, c, d, e] = kind.functions().map(|f| f.eval_integer(n));
        Ok(LocalTerms { leading: a?, cusps: b?, order2: c?, order3: d?, weight2: e? })
    }

    /// Twelve times the dimension.
    pub fn numerator(&self, k: Weight) -> i128 {
        let delta = i128::from(k.is_one());
        (2 * k.0 as i128 - 1) * self.leading - 6 * self.cusps
            + twelve_c2(k) * self.order2
            + twelve_c3(k) * self.order3
            + 12 * delta * self.weight2
    }

    /// The dimension, after checking the numerator is a nonnegative multiple of 12.
    pub fn assemble(&self, level: u64, k: Weight) -> Result<u64, DimensionError> {
        let numerator = self.numerator(k);
        let (q, r) = numerator.div_rem(&12);
        if r != 0 {
            return Err(DimensionError::NonIntegral { level, k: k.0, numerator });
        }
        if q < 0 {
            return Err(DimensionError::Negative { level, k: k.0, value: q });
        }
        Ok(q as u64)
    }
}

/// `dim S_{2k}(N)`.
pub fn dim_full(n: &Factorization, k: Weight) -> Result<u64, DimensionError> {
    LocalTerms::at(SpaceKind::Full, n)?.assemble(n.value(), k)
}

/// `dim S^new_{2k}(N)` from its own closed formula.
pub fn dim_new_direct(n: &Factorization, k: Weight) -> Result<u64, DimensionError> {
    LocalTerms::at(SpaceKind::New, n)?.assemble(n.value(), k)
}

/// `dim S^new_{2k}(N)` as `sum_{M | N} beta(N/M) dim S_{2k}(M)`.
pub fn dim_new_convolved(n: &Factorization, k: Weight) -> Result<u64, DimensionError> {
    let mut total: i128 = 0;
    for m in n.divisors() {
        let b = BETA.eval_integer(&n.quotient(&m))?;
        if b != 0 {
            total += b * i128::from(dim_full(&m, k)?);
        }
    }
    if total < 0 {
        return Err(DimensionError::Negative { level: n.value(), k: k.0, value: total });
    }
    Ok(total as u64)
}

pub fn dim(kind: SpaceKind, n: &Factorization, k: Weight) -> Result<u64, DimensionError> {
    match kind {
        SpaceKind::Full => dim_full(n, k),
        SpaceKind::New => dim_new_direct(n, k),
    }
}

/// The dimension formula evaluated entirely in rationals, term by term.
///
/// Slower than [`dim`]; kept as a second route through the same formula.
pub fn dim_rational(kind: SpaceKind, n: &Factorization, k: Weight) -> Rational {
    let [lead, cusps, o2, o3, w2] = kind.functions().map(|f| f.eval(n));
    let kk = k.0 as i64;
    let delta = if k.is_one() { w2 } else { rat(0, 1) };
    rat(2 * kk - 1, 12) * lead - rat(1, 2) * cusps + c2(k) * o2 + c3(k) * o3 + delta
}
