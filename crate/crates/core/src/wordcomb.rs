//! Combinatorics on words: primitive roots, commutation, conjugacy and
//! eventually periodic infinite words.
//!
//! Everything is generic over the letter type so the same kernel serves
//! output words (`char`) and input words (`Sym`).

use crate::error::WordError;

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> Result<usize, WordError> {
    if a == 0 || b == 0 {
        return Ok(0);
    }
    (a / gcd(a, b)).checked_mul(b).ok_or(WordError::Overflow)
}

/// Border lengths of every prefix (the KMP failure function).
fn borders<T: Eq>(x: &[T]) -> Vec<usize> {
    let mut f = vec![0usize; x.len()];
    let mut k = 0;
    for i in 1..x.len() {
        while k > 0 && x[i] != x[k] {
            k = f[k - 1];
        }
        if x[i] == x[k] {
            k += 1;
        }
        f[i] = k;
    }
    f
}

/// The primitive word `root` and exponent `e` with `root^e = x`.
pub fn primitive_root<T: Eq + Clone>(x: &[T]) -> Result<(Vec<T>, usize), WordError> {
    if x.is_empty() {
        return Err(WordError::EmptyWord);
    }
    let n = x.len();
    let period = n - borders(x)[n - 1];
    if n.is_multiple_of(period) {
        Ok((x[..period].to_vec(), n / period))
    } else {
        Ok((x.to_vec(), 1))
    }
}

pub fn is_primitive<T: Eq + Clone>(x: &[T]) -> bool {
    matches!(primitive_root(x), Ok((_, 1)))
}

/// A word `z` with `x, y ∈ z*`, which exists iff `xy = yx`. When one of the
/// words is nonempty, `z` is its primitive root.
pub fn commute<T: Eq + Clone>(x: &[T], y: &[T]) -> Option<Vec<T>> {
    let xy = x.iter().chain(y);
    let yx = y.iter().chain(x);
    if !xy.eq(yx) {
        return None;
    }
    let nonempty = if x.is_empty() { y } else { x };
    if nonempty.is_empty() {
        return Some(Vec::new());
    }
    primitive_root(nonempty).ok().map(|(root, _)| root)
}

/// The split `(t1, t2)` with `x = t1 t2` and `y = t2 t1` and `|t1|` least.
pub fn conjugacy_witness<T: Eq + Clone>(x: &[T], y: &[T]) -> Option<(Vec<T>, Vec<T>)> {
    if x.len() != y.len() {
        return None;
    }
    (0..=x.len()).find_map(|i| {
        let (t1, t2) = x.split_at(i);
        t2.iter().chain(t1).eq(y).then(|| (t1.to_vec(), t2.to_vec()))
    })
}

/// Whether `w` is a factor of `x^ω`.
fn factor_of_power<T: Eq>(w: &[T], x: &[T]) -> bool {
    (0..x.len()).any(|o| w.iter().enumerate().all(|(k, a)| *a == x[(o + k) % x.len()]))
}

/// When `shared` is a common factor of powers of `x` and `y` of length at
/// least `|x| + |y| - gcd(|x|, |y|)`, the primitive roots of `x` and `y`
/// are conjugate: returns the lexicographically least `(t1, t2)` with
/// `t1 t2` primitive, `x ∈ (t1 t2)+` and `y ∈ (t2 t1)+`. Returns `None`
/// when the length condition fails or `shared` is not such a factor.
pub fn overlap_roots<T: Eq + Clone + Ord>(x: &[T], y: &[T], shared: &[T]) -> Option<(Vec<T>, Vec<T>)> {
    if x.is_empty() || y.is_empty() {
        return None;
    }
    if shared.len() + gcd(x.len(), y.len()) < x.len() + y.len() {
        return None;
    }
    if !factor_of_power(shared, x) || !factor_of_power(shared, y) {
        return None;
    }
    let (px, _) = primitive_root(x).ok()?;
    let (py, _) = primitive_root(y).ok()?;
    if px.len() != py.len() {
        return None;
    }
    (0..=px.len())
        .filter_map(|i| {
            let (t1, t2) = px.split_at(i);
            t2.iter().chain(t1).eq(py.iter()).then(|| (t1.to_vec(), t2.to_vec()))
        })
        .min()
}

/// The eventually periodic infinite word `prefix · period^ω`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaWord<T> {
    prefix: Vec<T>,
    period: Vec<T>,
}

impl<T: Eq + Clone> OmegaWord<T> {
    pub fn new(prefix: Vec<T>, period: Vec<T>) -> Result<Self, WordError> {
        if period.is_empty() {
            return Err(WordError::EmptyWord);
        }
        Ok(OmegaWord { prefix, period })
    }

    pub fn prefix(&self) -> &[T] {
        &self.prefix
    }

    pub fn period(&self) -> &[T] {
        &self.period
    }

    pub fn letter(&self, i: usize) -> &T {
        if i < self.prefix.len() {
            &self.prefix[i]
        } else {
            &self.period[(i - self.prefix.len()) % self.period.len()]
        }
    }
}

/// Equality of two eventually periodic words, decided on the prefix of
/// length `max(|prefixes|) + lcm(|periods|)`.
pub fn omega_eq<T: Eq + Clone>(a: &OmegaWord<T>, b: &OmegaWord<T>) -> Result<bool, WordError> {
    let window = lcm(a.period.len(), b.period.len())?
        .checked_add(a.prefix.len().max(b.prefix.len()))
        .ok_or(WordError::Overflow)?;
    Ok((0..window).all(|i| a.letter(i) == b.letter(i)))
}

/// The least `(α, β)` with `x p^α = y p^β`, if any. Such a pair exists iff
/// `x p^ω = y p^ω` and `|x| ≡ |y| (mod |p|)`; the second condition is
/// automatic when `p` is primitive.
pub fn omega_align<T: Eq + Clone>(x: &[T], p: &[T], y: &[T]) -> Option<(usize, usize)> {
    if p.is_empty() {
        return None;
    }
    let a = OmegaWord::new(x.to_vec(), p.to_vec()).ok()?;
    let b = OmegaWord::new(y.to_vec(), p.to_vec()).ok()?;
    if !omega_eq(&a, &b).ok()? {
        return None;
    }
    let (short, long) = (x.len().min(y.len()), x.len().max(y.len()));
    if (long - short) % p.len() != 0 {
        return None;
    }
    let k = (long - short) / p.len();
    Some(if x.len() <= y.len() { (k, 0) } else { (0, k) })
}

/// Evaluates `v0 v1^i vm vb1^i vb0 = w0 w1^i wm wb1^i wb0`.
pub fn hk_equation<T: Eq>(v: [&[T]; 5], w: [&[T]; 5], i: usize) -> bool {
    fn side<'a, T>(p: [&'a [T]; 5], i: usize) -> impl Iterator<Item = &'a T> + 'a {
        let [x0, x1, xm, xb1, xb0] = p;
        x0.iter()
            .chain(std::iter::repeat_n(x1, i).flatten())
            .chain(xm)
            .chain(std::iter::repeat_n(xb1, i).flatten())
            .chain(xb0)
    }
    let lv = v[0].len() + v[2].len() + v[4].len() + i * (v[1].len() + v[3].len());
    let lw = w[0].len() + w[2].len() + w[4].len() + i * (w[1].len() + w[3].len());
    lv == lw && side(v, i).eq(side(w, i))
}
