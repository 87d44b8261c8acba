use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::algebra::parse_terms;
use crate::error::{Error, Result};
use crate::linalg::{Fp, FpMatrix, FpVector};

/// One named basis class of H*(M; F_p).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberClass {
    pub name: String,
    pub degree: u32,
}

/// A product entry `left * right = result`, the result a linear
/// combination of class names such as `"w"` or `"-2*w"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductRule {
    pub left: String,
    pub right: String,
    pub result: String,
}

/// A fiber class by (degree, index within the degree).
type ClassKey = (u32, usize);

/// The mod-p cohomology ring of a closed oriented 4-manifold, given by a
/// basis and a multiplication table. The unit `1` is implicit.
#[derive(Clone, Debug)]
pub struct FiberAlgebra {
    field: Fp,
    /// Per degree, the class names in basis order; degree 0 is `["1"]`.
    by_degree: [Vec<String>; 5],
    /// (degree, local index) of each name.
    lookup: HashMap<String, ClassKey>,
    /// Products of basis classes keyed by their (degree, index) pairs.
    table: HashMap<(ClassKey, ClassKey), FpVector>,
}

impl FiberAlgebra {
    pub fn new(p: u32, classes: &[FiberClass], products: &[ProductRule]) -> Result<Self> {
        let field = Fp::new(p)?;
        let mut by_degree: [Vec<String>; 5] = Default::default();
        by_degree[0].push("1".to_string());
        let mut lookup = HashMap::new();
        lookup.insert("1".to_string(), (0, 0));
        for c in classes {
            if c.degree == 0 || c.degree > 4 {
                return Err(Error::Fiber(format!("class {} has degree {}, expected 1..=4", c.name, c.degree)));
            }
            let valid = c.name.starts_with(|ch: char| ch.is_ascii_alphabetic())
                && c.name.chars().all(|ch| ch.is_ascii_alphanumeric() || ch == '_');
            if !valid {
                return Err(Error::Fiber(format!("bad class name {:?}", c.name)));
            }
            let d = c.degree as usize;
            if lookup.insert(c.name.clone(), (c.degree, by_degree[d].len())).is_some() {
                return Err(Error::Fiber(format!("duplicate class {:?}", c.name)));
            }
            by_degree[d].push(c.name.clone());
        }
        if by_degree[4].len() != 1 {
            return Err(Error::Fiber(format!("need exactly one degree-4 class, found {}", by_degree[4].len())));
        }
        let mut alg = FiberAlgebra { field, by_degree, lookup, table: HashMap::new() };
        for rule in products {
            alg.add_rule(rule)?;
        }
        alg.validate()?;
        Ok(alg)
    }

    fn add_rule(&mut self, rule: &ProductRule) -> Result<()> {
        let f = self.field;
        let a = self.class(&rule.left)?;
        let b = self.class(&rule.right)?;
        if a.0 == 0 || b.0 == 0 {
            return Err(Error::Fiber("products with the unit are implicit".into()));
        }
        let d = a.0 + b.0;
        if d > 4 {
            return Err(Error::Fiber(format!("{} * {} lands above degree 4", rule.left, rule.right)));
        }
        let v = self.parse_combination(&rule.result, d)?;
        let sign = f.sign(a.0 % 2 == 1 && b.0 % 2 == 1);
        let mirrored: FpVector = v.iter().map(|&c| f.mul(c, sign)).collect();
        for (key, val) in [((a, b), v), ((b, a), mirrored)] {
            match self.table.get(&key) {
                Some(old) if *old != val => {
                    return Err(Error::Fiber(format!("conflicting products for {} * {}", rule.left, rule.right)))
                }
                _ => {
                    self.table.insert(key, val);
                }
            }
        }
        Ok(())
    }

    /// Parse `"2*w - v"` into coordinates of degree `d`; `"0"` is zero.
    fn parse_combination(&self, s: &str, d: u32) -> Result<FpVector> {
        let f = self.field;
        let mut v = vec![0; self.dim(d)];
        for t in parse_terms(s)? {
            match t.factors.as_slice() {
                [] if f.reduce(t.coeff) == 0 => {}
                [(name, 1)] => {
                    let (cd, i) = self.class(name)?;
                    if cd != d {
                        return Err(Error::Fiber(format!("{name} has degree {cd}, expected {d} in {s:?}")));
                    }
                    v[i] = f.add(v[i], f.reduce(t.coeff));
                }
                [] if d == 0 => v[0] = f.add(v[0], f.reduce(t.coeff)),
                _ => return Err(Error::Fiber(format!("expected a linear combination of classes, got {s:?}"))),
            }
        }
        Ok(v)
    }

    fn validate(&self) -> Result<()> {
        let f = self.field;
        // odd classes square to zero for odd p
        if f.p() != 2 {
            for d in [1u32, 3] {
                for i in 0..self.dim(d) {
                    if self.product(d, i, d, i).iter().any(|&c| c != 0) {
                        return Err(Error::Fiber(format!(
                            "odd class {} does not square to zero",
                            self.by_degree[d as usize][i]
                        )));
                    }
                }
            }
        }
        // associativity on basis triples
        for d1 in 1..=4u32 {
            for d2 in 1..=4 - d1 {
                for d3 in 1..=4 - d1 - d2 {
                    for i in 0..self.dim(d1) {
                        for j in 0..self.dim(d2) {
                            for k in 0..self.dim(d3) {
                                let left =
                                    self.mul_vec(d1 + d2, &self.product(d1, i, d2, j), d3, &unit_vec(self.dim(d3), k));
                                let right =
                                    self.mul_vec(d1, &unit_vec(self.dim(d1), i), d2 + d3, &self.product(d2, j, d3, k));
                                if left != right {
                                    return Err(Error::Fiber(format!(
                                        "product is not associative on ({}, {}, {})",
                                        self.by_degree[d1 as usize][i],
                                        self.by_degree[d2 as usize][j],
                                        self.by_degree[d3 as usize][k]
                                    )));
                                }
                            }
                        }
                    }
                }
            }
        }
        // Poincaré duality
        for l in 0..=4u32 {
            if self.dim(l) != self.dim(4 - l) {
                return Err(Error::Fiber(format!("b_{l} = {} but b_{} = {}", self.dim(l), 4 - l, self.dim(4 - l))));
            }
            let rank = self.pairing(l).rank();
            if rank != self.dim(l) {
                return Err(Error::Fiber(format!(
                    "pairing in degree {l} is singular (rank {rank} of {})",
                    self.dim(l)
                )));
            }
        }
        Ok(())
    }

    /// Matrix of H^l x H^{4-l} -> H^4 = F_p.
    pub fn pairing(&self, l: u32) -> FpMatrix {
        let (a, b) = (self.dim(l), self.dim(4 - l));
        let mut m = FpMatrix::zeros(self.field, a, b);
        for i in 0..a {
            for j in 0..b {
                m.set(i, j, self.product(l, i, 4 - l, j)[0]);
            }
        }
        m
    }

    pub fn preset(name: &str, p: u32) -> Result<Self> {
        let c = |n: &str, d| FiberClass { name: n.into(), degree: d };
        let r = |a: &str, b: &str, res: &str| ProductRule { left: a.into(), right: b.into(), result: res.into() };
        match name {
            "cp2" => Self::new(p, &[c("z", 2), c("w", 4)], &[r("z", "z", "w")]),
            "s4" => Self::new(p, &[c("w", 4)], &[]),
            "s2xs2" => Self::new(p, &[c("a", 2), c("b", 2), c("w", 4)], &[r("a", "b", "w")]),
            "s1xs3" => Self::new(p, &[c("alpha", 1), c("beta", 3), c("w", 4)], &[r("alpha", "beta", "w")]),
            other => Err(Error::Fiber(format!("unknown preset {other:?}; known: cp2, s4, s2xs2, s1xs3"))),
        }
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    /// b_l, the number of basis classes in degree l (0 above 4).
    pub fn dim(&self, l: u32) -> usize {
        self.by_degree.get(l as usize).map_or(0, Vec::len)
    }

    pub fn betti(&self) -> [usize; 5] {
        std::array::from_fn(|l| self.by_degree[l].len())
    }

    pub fn total_dim(&self) -> usize {
        self.by_degree.iter().map(Vec::len).sum()
    }

    pub fn euler_characteristic(&self) -> i64 {
        (0..5).map(|l| if l % 2 == 0 { self.dim(l) as i64 } else { -(self.dim(l) as i64) }).sum()
    }

    pub fn classes(&self, l: u32) -> &[String] {
        self.by_degree.get(l as usize).map_or(&[], |v| v.as_slice())
    }

    /// (degree, local index) of a named class.
    pub fn class(&self, name: &str) -> Result<(u32, usize)> {
        self.lookup.get(name).copied().ok_or_else(|| Error::Fiber(format!("unknown class {name:?}")))
    }

    /// Product of two basis classes as coordinates in degree d1 + d2.
    pub fn product(&self, d1: u32, i: usize, d2: u32, j: usize) -> FpVector {
        let d = d1 + d2;
        if d > 4 {
            return Vec::new();
        }
        if d1 == 0 {
            return unit_vec(self.dim(d2), j);
        }
        if d2 == 0 {
            return unit_vec(self.dim(d1), i);
        }
        self.table.get(&((d1, i), (d2, j))).cloned().unwrap_or_else(|| vec![0; self.dim(d)])
    }

    fn mul_vec(&self, d1: u32, a: &[u32], d2: u32, b: &[u32]) -> FpVector {
        let f = self.field;
        let mut out = vec![0; self.dim(d1 + d2)];
        for (i, &x) in a.iter().enumerate().filter(|(_, &x)| x != 0) {
            for (j, &y) in b.iter().enumerate().filter(|(_, &y)| y != 0) {
                f.axpy(&mut out, f.mul(x, y), &self.product(d1, i, d2, j));
            }
        }
        out
    }
}

fn unit_vec(n: usize, i: usize) -> FpVector {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets() {
        let cp2 = FiberAlgebra::preset("cp2", 3).unwrap();
        assert_eq!(cp2.betti(), [1, 0, 1, 0, 1]);
        assert_eq!(cp2.euler_characteristic(), 3);
        assert_eq!(cp2.product(2, 0, 2, 0), vec![1]);
        let s = FiberAlgebra::preset("s1xs3", 5).unwrap();
        // beta * alpha = -w
        assert_eq!(s.product(3, 0, 1, 0), vec![4]);
        assert!(FiberAlgebra::preset("k3", 3).is_err());
    }

    #[test]
    fn rejects_bad_tables() {
        let c = |n: &str, d| FiberClass { name: n.into(), degree: d };
        let r = |a: &str, b: &str, res: &str| ProductRule { left: a.into(), right: b.into(), result: res.into() };
        // singular pairing
        assert!(FiberAlgebra::new(3, &[c("z", 2), c("w", 4)], &[]).is_err());
        // two top classes
        assert!(FiberAlgebra::new(3, &[c("w", 4), c("v", 4)], &[]).is_err());
        // b1 != b3
        assert!(FiberAlgebra::new(3, &[c("a", 1), c("w", 4)], &[]).is_err());
        // conflicting graded commutativity
        assert!(
            FiberAlgebra::new(3, &[c("a", 1), c("b", 3), c("w", 4)], &[r("a", "b", "w"), r("b", "a", "w")]).is_err()
        );
        // wrong degree in result
        assert!(FiberAlgebra::new(3, &[c("z", 2), c("w", 4)], &[r("z", "z", "z")]).is_err());
        // CP2 # CP2 with a diagonal form
        assert!(FiberAlgebra::new(3, &[c("z1", 2), c("z2", 2), c("w", 4)], &[r("z1", "z1", "w"), r("z2", "z2", "w")])
            .is_ok());
    }
}
