use std::fmt;

/// A generator of the graded module: `level` i carries degree −i.
/// Level 0 stands for the coordinate vector fields ∂/∂x_index.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Gen {
    pub level: u32,
    pub index: u32,
}

impl Gen {
    pub const fn new(level: u32, index: u32) -> Self {
        Gen { level, index }
    }

    pub fn degree(&self) -> i32 {
        -(self.level as i32)
    }

    pub fn is_odd(&self) -> bool {
        self.level % 2 == 1
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.level == 0 {
            write!(f, "d[{}]", self.index + 1)
        } else {
            write!(f, "e[{},{}]", self.level, self.index + 1)
        }
    }
}

/// ε with x_{σ(1)}⊙…⊙x_{σ(k)} = ε·x_1⊙…⊙x_k: one factor −1 per inversion
/// of σ between two odd elements.
pub fn koszul_sign(perm: &[usize], degrees: &[i32]) -> i32 {
    let mut s = 1;
    for i in 0..perm.len() {
        if degrees[perm[i]] % 2 == 0 {
            continue;
        }
        for j in (i + 1)..perm.len() {
            if perm[i] > perm[j] && degrees[perm[j]] % 2 != 0 {
                s = -s;
            }
        }
    }
    s
}

/// Sorts `letters` in place and returns the sign x_{given} = sign·x_{sorted},
/// or 0 if an odd letter repeats.
pub fn sort_with_sign(letters: &mut [Gen]) -> i32 {
    let mut sign = 1;
    // insertion sort; each adjacent swap of two odd letters flips the sign
    for i in 1..letters.len() {
        let mut j = i;
        while j > 0 && letters[j - 1] > letters[j] {
            if letters[j - 1].is_odd() && letters[j].is_odd() {
                sign = -sign;
            }
            letters.swap(j - 1, j);
            j -= 1;
        }
    }
    for w in letters.windows(2) {
        if w[0] == w[1] && w[0].is_odd() {
            return 0;
        }
    }
    sign
}

/// sign·(x_1⊙…⊙x_k).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GradedWord {
    letters: Vec<Gen>,
    sign: i32,
    canonical: bool,
}

impl GradedWord {
    /// The product of `letters` in the given order, sign +1.
    pub fn new(letters: Vec<Gen>) -> Self {
        let canonical = letters.windows(2).all(|w| w[0] <= w[1] && !(w[0] == w[1] && w[0].is_odd()));
        GradedWord { letters, sign: 1, canonical }
    }

    pub fn with_sign(letters: Vec<Gen>, sign: i32) -> Self {
        let mut w = Self::new(letters);
        w.sign = sign;
        w
    }

    /// Sorted form carrying the Koszul sign; `None` when the word vanishes.
    pub fn canonicalize(&self) -> Option<GradedWord> {
        let mut l = self.letters.clone();
        let s = sort_with_sign(&mut l);
        if s == 0 {
            return None;
        }
        Some(GradedWord { letters: l, sign: s * self.sign, canonical: true })
    }

    pub fn letters(&self) -> &[Gen] {
        &self.letters
    }

    pub fn sign(&self) -> i32 {
        self.sign
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn degree(&self) -> i32 {
        self.letters.iter().map(|g| g.degree()).sum()
    }
}

pub fn word_degree(letters: &[Gen]) -> i32 {
    letters.iter().map(|g| g.degree()).sum()
}

pub fn format_word(letters: &[Gen]) -> String {
    letters.iter().map(|g| g.to_string()).collect::<Vec<_>>().join("⊙")
}

impl fmt::Display for GradedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sign < 0 { "-" } else { "+" };
        write!(f, "{}{}", s, format_word(&self.letters))
    }
}
