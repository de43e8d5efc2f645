use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::ring::Coeff;
use super::PolyError;

/// Exponent vector ordered graded-lexicographically: total degree first, then
/// lexicographic on the exponents in variable order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| u64::from(e)).sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial with exact coefficients.
///
/// No zero coefficient is ever stored, so structural equality is polynomial
/// equality once the variable lists agree.
#[derive(Clone, Debug)]
pub struct MultiPoly<C> {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coeff> PartialEq for MultiPoly<C> {
    fn eq(&self, other: &Self) -> bool {
        if self.vars == other.vars {
            return self.terms == other.terms;
        }
        let (a, b) = unify(self, other);
        a.terms == b.terms
    }
}

impl<C: Coeff> MultiPoly<C> {
    pub fn zero(vars: &[&str]) -> Self {
        Self {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &[&str], c: C) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(vec![0; vars.len()], c);
        p
    }

    /// The polynomial consisting of the single variable `name`.
    pub fn var(vars: &[&str], name: &str) -> Result<Self, PolyError> {
        let idx = vars
            .iter()
            .position(|v| *v == name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
        let mut e = vec![0; vars.len()];
        e[idx] = 1;
        let mut p = Self::zero(vars);
        p.add_term(e, C::one());
        Ok(p)
    }

    pub fn from_terms(
        vars: &[&str],
        terms: impl IntoIterator<Item = (Vec<u32>, C)>,
    ) -> Result<Self, PolyError> {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            if e.len() != vars.len() {
                return Err(PolyError::ArityMismatch {
                    expected: vars.len(),
                    found: e.len(),
                });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn var_index(&self, name: &str) -> Result<usize, PolyError> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))
    }

    pub(crate) fn add_term(&mut self, e: Vec<u32>, c: C) {
        if c.is_zero() {
            return;
        }
        let key = Monomial(e);
        match self.terms.remove(&key) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(key, s);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    /// Coefficient of an exponent vector; zero when absent.
    pub fn coefficient_of(&self, exps: &[u32]) -> Result<C, PolyError> {
        if exps.len() != self.vars.len() {
            return Err(PolyError::ArityMismatch {
                expected: self.vars.len(),
                found: exps.len(),
            });
        }
        Ok(self
            .terms
            .get(&Monomial(exps.to_vec()))
            .cloned()
            .unwrap_or_else(C::zero))
    }

    /// Coefficient of `var^k` as a polynomial in the remaining variables
    /// (the variable list is kept, with `var` absent from every term).
    pub fn coefficient_in(&self, var: &str, k: u32) -> Result<Self, PolyError> {
        let idx = self.var_index(var)?;
        let mut out = Self {
            vars: self.vars.clone(),
            terms: BTreeMap::new(),
        };
        for (m, c) in &self.terms {
            if m.0[idx] == k {
                let mut e = m.0.clone();
                e[idx] = 0;
                out.add_term(e, c.clone());
            }
        }
        Ok(out)
    }

    pub fn degree_in(&self, var: &str) -> Result<u32, PolyError> {
        let idx = self.var_index(var)?;
        Ok(self.terms.keys().map(|m| m.0[idx]).max().unwrap_or(0))
    }

    /// Smallest exponent of `var` over all terms (0 for the zero polynomial).
    pub fn min_degree_in(&self, var: &str) -> Result<u32, PolyError> {
        let idx = self.var_index(var)?;
        Ok(self.terms.keys().map(|m| m.0[idx]).min().unwrap_or(0))
    }

    /// Divides every term by `var^k`; fails if some term has a smaller power.
    pub fn shift_down(&self, var: &str, k: u32) -> Result<Self, PolyError> {
        let idx = self.var_index(var)?;
        let mut out = Self {
            vars: self.vars.clone(),
            terms: BTreeMap::new(),
        };
        for (m, c) in &self.terms {
            if m.0[idx] < k {
                return Err(PolyError::NotDivisible(var.to_string()));
            }
            let mut e = m.0.clone();
            e[idx] -= k;
            out.terms.insert(Monomial(e), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, k: &C) -> Self {
        let mut out = Self {
            vars: self.vars.clone(),
            terms: BTreeMap::new(),
        };
        for (m, c) in &self.terms {
            out.add_term(m.0.clone(), c.clone() * k.clone());
        }
        out
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> MultiPoly<D> {
        let mut out = MultiPoly {
            vars: self.vars.clone(),
            terms: BTreeMap::new(),
        };
        for (m, c) in &self.terms {
            out.add_term(m.0.clone(), f(c));
        }
        out
    }

    /// Fallible coefficient conversion, e.g. demotion to a smaller ring.
    pub fn try_map_coeffs<D: Coeff, E>(&self, f: impl Fn(&C) -> Result<D, E>) -> Result<MultiPoly<D>, E> {
        let mut out = MultiPoly {
            vars: self.vars.clone(),
            terms: BTreeMap::new(),
        };
        for (m, c) in &self.terms {
            out.add_term(m.0.clone(), f(c)?);
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = Self::constant(&self.var_refs(), C::one());
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    fn var_refs(&self) -> Vec<&str> {
        self.vars.iter().map(String::as_str).collect()
    }

    /// Re-expresses the polynomial over `vars`, which must contain every
    /// variable that occurs in some term.
    pub fn with_vars(&self, vars: &[&str]) -> Result<Self, PolyError> {
        let map: Vec<Option<usize>> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v))
            .collect();
        let mut out = Self::zero(vars);
        for (m, c) in &self.terms {
            let mut e = vec![0; vars.len()];
            for (i, &x) in m.0.iter().enumerate() {
                match map[i] {
                    Some(j) => e[j] = x,
                    None if x == 0 => {}
                    None => return Err(PolyError::UnknownVariable(self.vars[i].clone())),
                }
            }
            out.add_term(e, c.clone());
        }
        Ok(out)
    }

    /// Replaces `var` by `repl`. The result's variables are this polynomial's
    /// variables without `var`, followed by any new variables of `repl`.
    pub fn substitute(&self, var: &str, repl: &Self) -> Result<Self, PolyError> {
        let idx = self.var_index(var)?;
        let mut vars: Vec<&str> = self
            .vars
            .iter()
            .filter(|v| v.as_str() != var)
            .map(String::as_str)
            .collect();
        for v in &repl.vars {
            if !vars.contains(&v.as_str()) && v != var {
                vars.push(v);
            }
        }
        if repl.vars.iter().any(|v| v == var) && repl.degree_in(var)? > 0 {
            // self-referential substitution like x -> x + 1
            vars.insert(idx.min(vars.len()), var);
        }
        let repl = repl.with_vars(&vars)?;

        // group by the power of `var`
        let mut groups: BTreeMap<u32, Self> = BTreeMap::new();
        for (m, c) in &self.terms {
            let k = m.0[idx];
            let rest: Vec<(String, u32)> = self
                .vars
                .iter()
                .zip(&m.0)
                .filter(|(v, _)| v.as_str() != var)
                .map(|(v, &e)| (v.clone(), e))
                .collect();
            let mut e = vec![0; vars.len()];
            for (v, x) in rest {
                let j = vars.iter().position(|w| *w == v).expect("kept variable");
                e[j] = x;
            }
            groups
                .entry(k)
                .or_insert_with(|| Self::zero(&vars))
                .add_term(e, c.clone());
        }

        let mut out = Self::zero(&vars);
        let mut power = Self::constant(&vars, C::one());
        let mut current = 0;
        for (k, g) in groups {
            while current < k {
                power = &power * &repl;
                current += 1;
            }
            out = &out + &(&g * &power);
        }
        Ok(out)
    }

    /// Exact evaluation; `lift` maps coefficients into the value ring.
    pub fn eval_with<V>(&self, assignment: &HashMap<&str, V>, lift: impl Fn(&C) -> V) -> Result<V, PolyError>
    where
        V: Clone + Zero + One + Mul<Output = V> + Add<Output = V>,
    {
        let values: Vec<&V> = self
            .vars
            .iter()
            .map(|v| {
                assignment
                    .get(v.as_str())
                    .ok_or_else(|| PolyError::MissingAssignment(v.clone()))
            })
            .collect::<Result<_, _>>()?;
        // power tables per variable
        let tables: Vec<Vec<V>> = values
            .iter()
            .enumerate()
            .map(|(i, x)| {
                let max = self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0);
                let mut t = Vec::with_capacity(max as usize + 1);
                t.push(V::one());
                for k in 1..=max as usize {
                    let next = t[k - 1].clone() * (*x).clone();
                    t.push(next);
                }
                t
            })
            .collect();
        let mut acc = V::zero();
        for (m, c) in &self.terms {
            let mut term = lift(c);
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    term = term * tables[i][e as usize].clone();
                }
            }
            acc = acc + term;
        }
        Ok(acc)
    }

    /// Univariate coefficient list (ascending) of a polynomial in one variable.
    pub fn to_univariate(&self, var: &str) -> Result<Vec<C>, PolyError> {
        let idx = self.var_index(var)?;
        let deg = self.degree_in(var)? as usize;
        let mut out = vec![C::zero(); deg + 1];
        for (m, c) in &self.terms {
            if m.0.iter().enumerate().any(|(i, &e)| i != idx && e != 0) {
                return Err(PolyError::NotUnivariate(var.to_string()));
            }
            out[m.0[idx] as usize] = c.clone();
        }
        Ok(out)
    }

    /// Builds the univariate polynomial sum `coeffs[k] * var^k`.
    pub fn from_univariate(var: &str, coeffs: &[C]) -> Self {
        let mut p = Self::zero(&[var]);
        for (k, c) in coeffs.iter().enumerate() {
            p.add_term(vec![k as u32], c.clone());
        }
        p
    }
}

impl MultiPoly<BigInt> {
    /// Integer polynomial in `vars` built from machine-integer terms.
    pub fn from_i64_terms(vars: &[&str], terms: &[(i64, &[u32])]) -> Result<Self, PolyError> {
        Self::from_terms(vars, terms.iter().map(|(c, e)| (e.to_vec(), BigInt::from(*c))))
    }
}

fn unify<C: Coeff>(a: &MultiPoly<C>, b: &MultiPoly<C>) -> (MultiPoly<C>, MultiPoly<C>) {
    if a.vars == b.vars {
        return (a.clone(), b.clone());
    }
    let mut vars: Vec<&str> = a.vars.iter().map(String::as_str).collect();
    for v in &b.vars {
        if !vars.contains(&v.as_str()) {
            vars.push(v);
        }
    }
    (
        a.with_vars(&vars).expect("superset of variables"),
        b.with_vars(&vars).expect("superset of variables"),
    )
}

impl<C: Coeff> Add for &MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn add(self, rhs: Self) -> MultiPoly<C> {
        let (mut a, b) = if self.vars == rhs.vars {
            (self.clone(), None)
        } else {
            let (a, b) = unify(self, rhs);
            (a, Some(b))
        };
        let b = b.as_ref().unwrap_or(rhs);
        for (m, c) in &b.terms {
            a.add_term(m.0.clone(), c.clone());
        }
        a
    }
}

impl<C: Coeff> Neg for &MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn neg(self) -> MultiPoly<C> {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl<C: Coeff> Sub for &MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn sub(self, rhs: Self) -> MultiPoly<C> {
        self + &(-rhs)
    }
}

impl<C: Coeff> Mul for &MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn mul(self, rhs: Self) -> MultiPoly<C> {
        let (a, b) = unify(self, rhs);
        let mut acc: HashMap<Vec<u32>, C> = HashMap::new();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let e: Vec<u32> = ma.0.iter().zip(&mb.0).map(|(x, y)| x + y).collect();
                let prod = ca.clone() * cb.clone();
                match acc.get_mut(&e) {
                    Some(slot) => *slot = slot.clone() + prod,
                    None => {
                        acc.insert(e, prod);
                    }
                }
            }
        }
        let mut out = MultiPoly {
            vars: a.vars.clone(),
            terms: BTreeMap::new(),
        };
        for (e, c) in acc {
            if !c.is_zero() {
                out.terms.insert(Monomial(e), c);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn ip(vars: &[&str], terms: &[(i64, &[u32])]) -> MultiPoly<BigInt> {
        MultiPoly::from_i64_terms(vars, terms).unwrap()
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let a = ip(&["t"], &[(1, &[2]), (1, &[0])]);
        let b = ip(&["t"], &[(-1, &[0])]);
        let s = &a + &b;
        assert_eq!(s, ip(&["t"], &[(1, &[2])]));
        assert_eq!(s.num_terms(), 1);
    }

    #[test]
    fn add_unifies_variables_by_name() {
        let a = ip(&["p", "q"], &[(1, &[1, 0]), (1, &[0, 1])]);
        let b = ip(&["q", "p"], &[(-1, &[1, 0]), (1, &[0, 1])]);
        assert_eq!(&a + &b, ip(&["p", "q"], &[(2, &[1, 0])]));
    }

    #[test]
    fn additive_inverse_is_zero() {
        let a = ip(&["t", "p"], &[(3, &[2, 1]), (-7, &[0, 4])]);
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn difference_of_squares() {
        let a = ip(&["t"], &[(1, &[1]), (-1, &[0])]);
        let b = ip(&["t"], &[(1, &[1]), (1, &[0])]);
        assert_eq!(&a * &b, ip(&["t"], &[(1, &[2]), (-1, &[0])]));
    }

    #[test]
    fn substitute_shift_and_identity() {
        let x = ip(&["x", "y"], &[(1, &[2, 0]), (3, &[1, 1]), (-1, &[0, 0])]);
        let id = MultiPoly::var(&["x"], "x").unwrap();
        assert_eq!(x.substitute("x", &id).unwrap(), x);

        // x -> y + 1
        let repl = ip(&["y"], &[(1, &[1]), (1, &[0])]);
        let got = x.substitute("x", &repl).unwrap();
        // (y+1)^2 + 3(y+1)y - 1 = 4y^2 + 5y
        assert_eq!(got, ip(&["y"], &[(4, &[2]), (5, &[1])]));
    }

    #[test]
    fn substitute_unknown_variable_errors() {
        let x = ip(&["x"], &[(1, &[1])]);
        assert!(matches!(
            x.substitute("z", &x),
            Err(PolyError::UnknownVariable(_))
        ));
    }

    #[test]
    fn eval_missing_assignment() {
        let x = ip(&["x", "y"], &[(1, &[1, 1])]);
        let mut env = HashMap::new();
        env.insert("x", BigRational::from_integer(2.into()));
        let r = x.eval_with(&env, |c| BigRational::from_integer(c.clone()));
        assert!(matches!(r, Err(PolyError::MissingAssignment(v)) if v == "y"));
    }

    #[test]
    fn coefficient_of_absent_is_zero() {
        let x = ip(&["t"], &[(1, &[10])]);
        assert_eq!(x.coefficient_of(&[11]).unwrap(), BigInt::zero());
        assert!(x.coefficient_of(&[1, 1]).is_err());
    }

    #[test]
    fn grlex_order() {
        let a = Monomial(vec![2, 0]);
        let b = Monomial(vec![0, 3]);
        let c = Monomial(vec![1, 2]);
        assert!(a < b);
        assert!(b < c);
    }
}
