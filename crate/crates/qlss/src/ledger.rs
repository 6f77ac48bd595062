use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul};

use serde::{Deserialize, Serialize};

/// Oracle call counts, split by adjoint and control.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QueryLedger {
    pub u_a: u64,
    pub u_a_dag: u64,
    pub c_u_a: u64,
    pub c_u_a_dag: u64,
    pub u_b: u64,
    pub u_b_dag: u64,
    pub c_u_b: u64,
    pub c_u_b_dag: u64,
}

impl QueryLedger {
    pub fn zero() -> Self {
        Self::default()
    }

    /// All calls to U_A, its adjoint and their controlled versions.
    pub fn combined_a(&self) -> u64 {
        self.u_a + self.u_a_dag + self.c_u_a + self.c_u_a_dag
    }

    pub fn combined_b(&self) -> u64 {
        self.u_b + self.u_b_dag + self.c_u_b + self.c_u_b_dag
    }

    pub fn total(&self) -> u64 {
        self.combined_a() + self.combined_b()
    }

    pub fn merge(&mut self, other: &QueryLedger) {
        *self += *other;
    }

    fn zip(self, o: Self, f: impl Fn(u64, u64) -> u64) -> Self {
        Self {
            u_a: f(self.u_a, o.u_a),
            u_a_dag: f(self.u_a_dag, o.u_a_dag),
            c_u_a: f(self.c_u_a, o.c_u_a),
            c_u_a_dag: f(self.c_u_a_dag, o.c_u_a_dag),
            u_b: f(self.u_b, o.u_b),
            u_b_dag: f(self.u_b_dag, o.u_b_dag),
            c_u_b: f(self.c_u_b, o.c_u_b),
            c_u_b_dag: f(self.c_u_b_dag, o.c_u_b_dag),
        }
    }
}

impl Add for QueryLedger {
    type Output = QueryLedger;
    fn add(self, o: Self) -> Self {
        self.zip(o, |a, b| a + b)
    }
}

impl AddAssign for QueryLedger {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Mul<u64> for QueryLedger {
    type Output = QueryLedger;
    fn mul(self, k: u64) -> Self {
        self.zip(Self::default(), |a, _| a * k)
    }
}

impl Sum for QueryLedger {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::default(), |a, b| a + b)
    }
}

impl<'a> Sum<&'a QueryLedger> for QueryLedger {
    fn sum<I: Iterator<Item = &'a QueryLedger>>(iter: I) -> Self {
        iter.fold(Self::default(), |a, b| a + *b)
    }
}
