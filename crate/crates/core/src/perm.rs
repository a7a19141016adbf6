//! Permutations on `{0..n-1}` stored as images, plus reduced-word machinery
//! used by the spin-extension sign code.
//!
//! Products are apply-left-first throughout: `(a * b)(x) = b(a(x))`, so a
//! word `s_{w0} s_{w1} ...` acts by `w0` first.

/// A permutation of `{0..n-1}`. `perm[i]` is the image of `i`.
///
/// Grid states use these with `i` a column index and `perm[i]` the row of the
/// state point on that column's vertical circle.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(pub Vec<u8>);

impl std::fmt::Debug for Perm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u8).collect())
    }

    pub fn from_slice(v: &[u8]) -> Self {
        Perm(v.to_vec())
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn is_permutation(v: &[u8]) -> bool {
        let n = v.len();
        let mut seen = vec![false; n];
        for &x in v {
            if (x as usize) >= n || seen[x as usize] {
                return false;
            }
            seen[x as usize] = true;
        }
        true
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u8; self.n()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v as usize] = i as u8;
        }
        Perm(inv)
    }

    /// `self` then `other`: `(self * other)(x) = other(self(x))`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&v| other.0[v as usize]).collect())
    }

    /// `s_i * self` (the adjacent transposition applied first): swaps the
    /// entries at positions `i`, `i+1`.
    pub fn pre_swap(&self, i: usize) -> Perm {
        let mut v = self.0.clone();
        v.swap(i, i + 1);
        Perm(v)
    }

    /// `self * s_j` (the transposition applied last): swaps the values `j`
    /// and `j+1` wherever they occur in the image.
    pub fn post_swap(&self, j: usize) -> Perm {
        let j = j as u8;
        Perm(
            self.0
                .iter()
                .map(|&v| {
                    if v == j {
                        j + 1
                    } else if v == j + 1 {
                        j
                    } else {
                        v
                    }
                })
                .collect(),
        )
    }

    /// Swap the images of positions `i` and `j` (transposition of columns,
    /// applied first): `(i j) * self`.
    pub fn swapped(&self, i: usize, j: usize) -> Perm {
        let mut v = self.0.clone();
        v.swap(i, j);
        Perm(v)
    }

    pub fn num_inversions(&self) -> usize {
        let n = self.n();
        let mut c = 0;
        for i in 0..n {
            for j in i + 1..n {
                if self.0[i] > self.0[j] {
                    c += 1;
                }
            }
        }
        c
    }

    /// Lexicographic rank among all n! permutations of the same size.
    pub fn lehmer_rank(&self) -> usize {
        let n = self.n();
        let mut rank = 0usize;
        let mut fact: usize = (1..n).product::<usize>().max(1);
        let mut used = vec![false; n];
        for i in 0..n {
            let v = self.0[i] as usize;
            let smaller = (0..v).filter(|&u| !used[u]).count();
            rank += smaller * fact;
            used[v] = true;
            if n - 1 - i > 0 {
                fact /= n - 1 - i;
            }
        }
        rank
    }

    /// The lexicographically-least reduced word for this permutation in the
    /// adjacent transpositions `s_0..s_{n-2}`: the element equals
    /// `s_{w[0]} * s_{w[1]} * ...` (apply-left-first).
    pub fn lex_least_reduced_word(&self) -> Vec<u8> {
        // Greedy: s_i can start a reduced word iff stripping it shortens,
        // i.e. sigma has a descent at position i.
        let mut w = Vec::with_capacity(self.num_inversions());
        let mut cur = self.clone();
        loop {
            let n = cur.n();
            let mut found = None;
            for i in 0..n.saturating_sub(1) {
                if cur.0[i] > cur.0[i + 1] {
                    found = Some(i);
                    break;
                }
            }
            match found {
                None => break,
                Some(i) => {
                    w.push(i as u8);
                    cur = cur.pre_swap(i); // strip s_i from the left
                }
            }
        }
        w
    }
}

/// Fold a word (apply-left-first) into a permutation.
pub fn perm_of_word(n: usize, w: &[u8]) -> Perm {
    let mut q = Perm::identity(n);
    // s_{w0} * s_{w1} * ... : fold by right-multiplication.
    for &j in w {
        q = q.post_swap(j as usize);
    }
    q
}

/// Iterate all permutations of size `n` in lexicographic order.
pub fn all_perms(n: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut v: Vec<u8> = (0..n as u8).collect();
    loop {
        out.push(Perm(v.clone()));
        let n = v.len();
        if n < 2 {
            break;
        }
        let mut i = n - 1;
        while i > 0 && v[i - 1] >= v[i] {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        let mut j = n - 1;
        while v[j] <= v[i - 1] {
            j -= 1;
        }
        v.swap(i - 1, j);
        v[i..].reverse();
    }
    out
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product::<usize>().max(1)
}
