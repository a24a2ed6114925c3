use super::RawNuSeries;
use crate::arith::{nu_pochhammer, GaussRational};
use crate::error::{Error, Result};
use crate::tensor::{reduce_degree, SymbolTensor};

/// An element `Φ = Σ_{r=0}^{k} ν^{k−r} ν^{(r)} φ_r` of the filtered algebra,
/// with `φ_r` held at degree r. `components[r]` is φ_r; the level k is
/// `components.len() − 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarElement {
    n: usize,
    components: Vec<SymbolTensor>,
}

impl StarElement {
    /// `components[r]` may be given at any degree ≤ r; it is embedded to r.
    pub fn new(n: usize, components: Vec<SymbolTensor>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::DimensionMismatch("a star element needs at least one component".into()));
        }
        let mut out = Vec::with_capacity(components.len());
        for (r, c) in components.into_iter().enumerate() {
            if c.n() != n {
                return Err(Error::DimensionMismatch(format!("component of n = {} in element of n = {n}", c.n())));
            }
            let c = if c.is_zero() {
                SymbolTensor::zero(n, r)
            } else {
                let c = c.minimal();
                if c.degree() > r {
                    return Err(Error::InternalDegree(format!(
                        "component {r} has minimal degree {}",
                        c.degree()
                    )));
                }
                c.embed_to(r)
            };
            out.push(c);
        }
        Ok(StarElement { n, components: out })
    }

    pub fn zero(n: usize) -> Self {
        StarElement {
            n,
            components: vec![SymbolTensor::zero(n, 0)],
        }
    }

    pub fn unit(n: usize) -> Self {
        Self::constant(n, GaussRational::from_int(1))
    }

    pub fn constant(n: usize, c: GaussRational) -> Self {
        StarElement {
            n,
            components: vec![SymbolTensor::constant(n, c)],
        }
    }

    /// ν^{(k)} f at level k = deg f.
    pub fn lift(f: &SymbolTensor) -> Self {
        let k = f.degree();
        let mut components: Vec<SymbolTensor> = (0..k).map(|r| SymbolTensor::zero(f.n(), r)).collect();
        components.push(f.clone());
        StarElement { n: f.n(), components }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn level(&self) -> usize {
        self.components.len() - 1
    }

    /// φ_r, at degree r.
    pub fn component(&self, r: usize) -> &SymbolTensor {
        &self.components[r]
    }

    pub fn components(&self) -> &[SymbolTensor] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_zero())
    }

    /// Σ ν^{k−r} ν^{(r)} φ_r as a series at degree k.
    pub fn expand(&self) -> RawNuSeries {
        let k = self.level();
        let mut s = RawNuSeries::zero(self.n, k);
        for (r, phi) in self.components.iter().enumerate() {
            if phi.is_zero() {
                continue;
            }
            let term = RawNuSeries::constant(phi).mul_poly(&nu_pochhammer(r).shift(k - r));
            s = s.add(&term).expect("same n");
        }
        s
    }

    /// The same element one level up, using
    /// ν^{k−r}ν^{(r)} = ν^{k−r}ν^{(r+1)} + r·ν^{k+1−r}ν^{(r)}.
    pub fn raise_level(&self) -> Self {
        let k = self.level();
        let mut comps: Vec<SymbolTensor> = (0..=k + 1).map(|r| SymbolTensor::zero(self.n, r)).collect();
        for (r, phi) in self.components.iter().enumerate() {
            if phi.is_zero() {
                continue;
            }
            comps[r + 1] = comps[r + 1].add(&crate::tensor::embed(phi)).expect("degrees match");
            if r > 0 {
                let scaled = phi.scale(&GaussRational::from_int(r as i64));
                comps[r] = comps[r].add(&scaled).expect("degrees match");
            }
        }
        StarElement { n: self.n, components: comps }
    }

    /// The element raised to level `level ≥ self.level()`.
    pub fn at_level(&self, level: usize) -> Self {
        assert!(level >= self.level(), "cannot lower the level by raising");
        let mut out = self.clone();
        while out.level() < level {
            out = out.raise_level();
        }
        out
    }

    /// ν·Φ, one level up with the same components.
    pub fn shift_nu(&self) -> Self {
        let mut comps = self.components.clone();
        comps.push(SymbolTensor::zero(self.n, self.level() + 1));
        StarElement { n: self.n, components: comps }
    }

    pub fn scale(&self, c: &GaussRational) -> Self {
        StarElement {
            n: self.n,
            components: self.components.iter().map(|t| t.scale(c)).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        if self.n != o.n {
            return Err(Error::DimensionMismatch(format!("n = {} vs n = {}", self.n, o.n)));
        }
        let level = self.level().max(o.level());
        let (a, b) = (self.at_level(level), o.at_level(level));
        let comps = a
            .components
            .iter()
            .zip(&b.components)
            .map(|(x, y)| x.add(y))
            .collect::<Result<Vec<_>>>()?;
        Ok(StarElement { n: self.n, components: comps })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.scale(&GaussRational::from_int(-1)))
    }

    /// The same element at the lowest level at which it has a decomposition.
    pub fn minimized(&self) -> Self {
        let s = self.expand();
        for j in 0..self.level() {
            if let Some(e) = extract_structure(&s, j) {
                return e;
            }
        }
        self.clone()
    }

    /// Equality as ν-polynomials of functions.
    pub fn same_element(&self, o: &Self) -> bool {
        self.n == o.n && self.expand().same_series(&o.expand())
    }
}

/// Decomposes a series as a level-k element, peeling
/// `s = ν^{(k)}φ_k + ν·u_{k−1}` one level at a time.
pub fn extract_structure(s: &RawNuSeries, k: usize) -> Option<StarElement> {
    let n = s.n();
    let d = s.degree().max(k);
    let mut rest = s.embed_to(d);
    let mut comps: Vec<SymbolTensor> = (0..=k).map(|r| SymbolTensor::zero(n, r)).collect();
    for j in (0..=k).rev() {
        let mut phi = rest.coeff(0);
        while phi.degree() > j {
            phi = reduce_degree(&phi)?;
        }
        let peeled = RawNuSeries::constant(&phi).mul_poly(&nu_pochhammer(j));
        rest = rest.sub(&peeled).ok()?;
        comps[j] = phi;
        if j == 0 {
            return rest.is_zero().then_some(StarElement { n, components: comps });
        }
        rest = rest.div_nu()?;
    }
    unreachable!("loop returns at level 0")
}
