use std::fmt;

/// A set of root indices stored as a fixed-width bitset.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct RootSet {
    words: Vec<u64>,
}

impl RootSet {
    pub fn empty(n: usize) -> Self {
        RootSet {
            words: vec![0; n.div_ceil(64)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = RootSet::empty(n);
        for i in 0..n {
            s.insert(i);
        }
        s
    }

    pub fn from_indices(n: usize, it: impl IntoIterator<Item = usize>) -> Self {
        let mut s = RootSet::empty(n);
        for i in it {
            s.insert(i);
        }
        s
    }

    pub fn insert(&mut self, i: usize) -> bool {
        let (w, b) = (i / 64, i % 64);
        let was = self.words[w] >> b & 1 == 1;
        self.words[w] |= 1 << b;
        !was
    }

    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words
            .get(i / 64)
            .is_some_and(|w| w >> (i % 64) & 1 == 1)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| wi * 64 + b)
        })
    }

    pub fn union(&self, o: &RootSet) -> RootSet {
        RootSet {
            words: self.words.iter().zip(&o.words).map(|(a, b)| a | b).collect(),
        }
    }

    pub fn intersection(&self, o: &RootSet) -> RootSet {
        RootSet {
            words: self.words.iter().zip(&o.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn difference(&self, o: &RootSet) -> RootSet {
        RootSet {
            words: self.words.iter().zip(&o.words).map(|(a, b)| a & !b).collect(),
        }
    }

    pub fn is_subset(&self, o: &RootSet) -> bool {
        self.words.iter().zip(&o.words).all(|(a, b)| a & !b == 0)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for RootSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
