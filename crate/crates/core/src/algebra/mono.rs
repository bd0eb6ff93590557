use std::cmp::Ordering;

use smallvec::SmallVec;

/// Exponent vector with trailing zeros trimmed, so that a monomial over
/// `n` variables is also a monomial over any extension `n + m`.
///
/// The derived `Ord` is lexicographic with variable 0 largest.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Mono(SmallVec<[u32; 6]>);

impl std::fmt::Debug for Mono {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

impl Mono {
    pub fn one() -> Self {
        Mono(SmallVec::new())
    }

    pub fn from_exps(exps: &[u32]) -> Self {
        let mut v: SmallVec<[u32; 6]> = SmallVec::from_slice(exps);
        while v.last() == Some(&0) {
            v.pop();
        }
        Mono(v)
    }

    /// `x_i^e`
    pub fn var(i: usize, e: u32) -> Self {
        let mut v: SmallVec<[u32; 6]> = SmallVec::from_elem(0, i + 1);
        v[i] = e;
        Mono::from_exps(&v)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    /// Exponent of variable `i` (zero past the stored length).
    pub fn exp(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Number of slots actually stored; every variable past this has exponent 0.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        let n = self.0.len().max(other.0.len());
        let mut v: SmallVec<[u32; 6]> = SmallVec::with_capacity(n);
        for i in 0..n {
            v.push(self.exp(i) + other.exp(i));
        }
        Mono(v)
    }

    pub fn divides(&self, other: &Mono) -> bool {
        self.0.len() <= other.0.len() && self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Mono) -> Mono {
        let mut v: SmallVec<[u32; 6]> = SmallVec::with_capacity(other.0.len());
        for i in 0..other.0.len() {
            v.push(other.exp(i) - self.exp(i));
        }
        Mono::from_exps(&v)
    }

    pub fn lcm(&self, other: &Mono) -> Mono {
        let n = self.0.len().max(other.0.len());
        let v: SmallVec<[u32; 6]> = (0..n).map(|i| self.exp(i).max(other.exp(i))).collect();
        Mono(v)
    }

    pub fn gcd(&self, other: &Mono) -> Mono {
        let n = self.0.len().min(other.0.len());
        let v: SmallVec<[u32; 6]> = (0..n).map(|i| self.exp(i).min(other.exp(i))).collect();
        Mono::from_exps(&v)
    }

    pub fn coprime(&self, other: &Mono) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Drops variable `i`'s exponent to zero.
    pub fn without(&self, i: usize) -> Mono {
        if i >= self.0.len() {
            return self.clone();
        }
        let mut v = self.0.clone();
        v[i] = 0;
        Mono::from_exps(&v)
    }

    /// Reindexes slot `i` to `map[i]`; `map` must be injective.
    pub fn remap(&self, map: &[usize]) -> Mono {
        let n = self.0.iter().enumerate().filter(|(_, e)| **e > 0).map(|(i, _)| map[i] + 1).max().unwrap_or(0);
        let mut v: SmallVec<[u32; 6]> = SmallVec::from_elem(0, n);
        for (i, e) in self.0.iter().enumerate() {
            if *e > 0 {
                v[map[i]] += *e;
            }
        }
        Mono::from_exps(&v)
    }

    /// Highest variable index carrying a positive exponent.
    pub fn max_var(&self) -> Option<usize> {
        if self.0.is_empty() {
            None
        } else {
            Some(self.0.len() - 1)
        }
    }
}

/// Monomial orders used by the Gröbner engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TermOrder {
    Lex,
    Grevlex,
    /// Elimination order: grevlex on the first `n` variables, ties broken by
    /// grevlex on the remaining ones.
    Block(usize),
}

fn grevlex_range(a: &Mono, b: &Mono, lo: usize, hi: usize) -> Ordering {
    let da: u32 = (lo..hi).map(|i| a.exp(i)).sum();
    let db: u32 = (lo..hi).map(|i| b.exp(i)).sum();
    if da != db {
        return da.cmp(&db);
    }
    for i in (lo..hi).rev() {
        let (x, y) = (a.exp(i), b.exp(i));
        if x != y {
            // smaller exponent in the last differing variable is larger
            return y.cmp(&x);
        }
    }
    Ordering::Equal
}

impl TermOrder {
    pub fn cmp(&self, a: &Mono, b: &Mono) -> Ordering {
        match self {
            TermOrder::Lex => a.cmp(b),
            TermOrder::Grevlex => {
                let hi = a.len().max(b.len());
                grevlex_range(a, b, 0, hi)
            }
            TermOrder::Block(n) => {
                let hi = a.len().max(b.len()).max(*n);
                grevlex_range(a, b, 0, *n).then_with(|| grevlex_range(a, b, *n, hi))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trimming_makes_embeddings_equal() {
        assert_eq!(Mono::from_exps(&[1, 0, 0]), Mono::from_exps(&[1]));
        assert_eq!(Mono::var(2, 0), Mono::one());
    }

    #[test]
    fn grevlex_breaks_ties_on_last_variable() {
        // x*z < y^2 in grevlex with x > y > z
        let xz = Mono::from_exps(&[1, 0, 1]);
        let yy = Mono::from_exps(&[0, 2]);
        assert_eq!(TermOrder::Grevlex.cmp(&xz, &yy), Ordering::Less);
        assert_eq!(TermOrder::Lex.cmp(&xz, &yy), Ordering::Greater);
    }

    #[test]
    fn block_order_eliminates_first_block() {
        let x = Mono::var(0, 1);
        let y5 = Mono::var(1, 5);
        assert_eq!(TermOrder::Block(1).cmp(&x, &y5), Ordering::Greater);
        assert_eq!(TermOrder::Grevlex.cmp(&x, &y5), Ordering::Less);
    }

    #[test]
    fn divisibility_and_quotient() {
        let a = Mono::from_exps(&[1, 2]);
        let b = Mono::from_exps(&[2, 3, 1]);
        assert!(a.divides(&b));
        assert_eq!(a.quotient_of(&b), Mono::from_exps(&[1, 1, 1]));
        assert!(!b.divides(&a));
    }
}
