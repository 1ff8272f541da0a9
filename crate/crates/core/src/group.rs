//! Generic finite-group routines over any element type with composition.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

pub trait GroupElement: Clone + Ord {
    fn compose(&self, other: &Self) -> Self;
    fn inverse(&self) -> Self;
    fn is_identity(&self) -> bool;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("group closure exceeded {0} elements")]
pub struct BoundExceeded(pub usize);

/// Multiplicative closure of `generators` together with `identity`, in sorted order.
pub fn generate<T: GroupElement>(identity: T, generators: &[T], bound: usize) -> Result<Vec<T>, BoundExceeded> {
    let mut seen: BTreeSet<T> = BTreeSet::new();
    seen.insert(identity.clone());
    let mut frontier = Vec::from([identity]);
    while let Some(x) = frontier.pop() {
        for g in generators {
            let y = x.compose(g);
            if !seen.contains(&y) {
                if seen.len() >= bound {
                    return Err(BoundExceeded(bound));
                }
                seen.insert(y.clone());
                frontier.push(y);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

pub fn element_order<T: GroupElement>(x: &T) -> usize {
    let mut k = 1;
    let mut y = x.clone();
    while !y.is_identity() {
        y = y.compose(x);
        k += 1;
    }
    k
}

pub fn is_closed<T: GroupElement>(elements: &[T]) -> bool {
    let set: BTreeSet<&T> = elements.iter().collect();
    elements.iter().any(GroupElement::is_identity)
        && elements.iter().all(|a| set.contains(&a.inverse()))
        && elements.iter().all(|a| elements.iter().all(|b| set.contains(&a.compose(b))))
}

/// `{ g x g^{-1} : g in group }`, sorted.
pub fn conjugacy_class<T: GroupElement>(x: &T, group: &[T]) -> Vec<T> {
    let set: BTreeSet<T> = group.iter().map(|g| g.compose(x).compose(&g.inverse())).collect();
    set.into_iter().collect()
}

/// Conjugacy classes, each sorted, ordered by their least element.
pub fn conjugacy_classes<T: GroupElement>(group: &[T]) -> Vec<Vec<T>> {
    let mut assigned: BTreeSet<T> = BTreeSet::new();
    let mut sorted: Vec<&T> = group.iter().collect();
    sorted.sort();
    let mut classes = Vec::new();
    for x in sorted {
        if assigned.contains(x) {
            continue;
        }
        let class = conjugacy_class(x, group);
        assigned.extend(class.iter().cloned());
        classes.push(class);
    }
    classes
}

/// Every subgroup of the finite group `group`, each as a sorted element list.
/// Built by closing subgroups under one more element at a time, working on
/// indices into a precomputed multiplication table.
pub fn subgroups<T: GroupElement>(group: &[T]) -> Vec<Vec<T>> {
    let mut elements: Vec<&T> = group.iter().collect();
    elements.sort();
    elements.dedup();
    let index: BTreeMap<&T, usize> = elements.iter().enumerate().map(|(i, x)| (*x, i)).collect();
    let table: Vec<Vec<usize>> =
        elements.iter().map(|a| elements.iter().map(|b| index[&a.compose(b)]).collect()).collect();
    let identity = elements.iter().position(|g| g.is_identity()).expect("group contains the identity");
    let close = |gens: &[usize]| -> Vec<usize> {
        let mut seen = BTreeSet::from([identity]);
        let mut frontier = Vec::from([identity]);
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = table[x][g];
                if seen.insert(y) {
                    frontier.push(y);
                }
            }
        }
        seen.into_iter().collect()
    };
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    let trivial = Vec::from([identity]);
    found.insert(trivial.clone());
    let mut frontier = Vec::from([trivial]);
    while let Some(h) = frontier.pop() {
        for g in 0..elements.len() {
            if h.binary_search(&g).is_ok() {
                continue;
            }
            let mut gens = h.clone();
            gens.push(g);
            let bigger = close(&gens);
            if found.insert(bigger.clone()) {
                frontier.push(bigger);
            }
        }
    }
    // Index order is element order, so each subgroup comes out sorted.
    let mut all: Vec<Vec<T>> =
        found.into_iter().map(|s| s.into_iter().map(|i| elements[i].clone()).collect()).collect();
    all.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    all
}

/// Isomorphism type of a small finite group, decided from its order,
/// commutativity and element orders.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IsotropyType {
    Cyclic(usize),
    KleinFour,
    /// Dihedral group with `2m` elements, the symmetries of an `m`-gon.
    Dihedral(usize),
    Other {
        order: usize,
        element_orders: Vec<usize>,
    },
}

impl IsotropyType {
    pub fn order(&self) -> usize {
        match self {
            IsotropyType::Cyclic(m) => *m,
            IsotropyType::KleinFour => 4,
            IsotropyType::Dihedral(m) => 2 * m,
            IsotropyType::Other { order, .. } => *order,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }
}

impl fmt::Display for IsotropyType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IsotropyType::Cyclic(m) => write!(f, "Z{m}"),
            IsotropyType::KleinFour => f.write_str("Z2xZ2"),
            IsotropyType::Dihedral(m) => write!(f, "D{}", 2 * m),
            IsotropyType::Other { order, element_orders } => {
                write!(f, "Other(order {order}, element orders {element_orders:?})")
            }
        }
    }
}

/// Classifies a finite group given as its full element list.
pub fn classify<T: GroupElement>(elements: &[T]) -> IsotropyType {
    let order = elements.len();
    let mut orders: Vec<usize> = elements.iter().map(element_order).collect();
    orders.sort_unstable();
    let max = orders.last().copied().unwrap_or(1);
    if max == order {
        return IsotropyType::Cyclic(order);
    }
    let abelian = elements.iter().all(|a| elements.iter().all(|b| a.compose(b) == b.compose(a)));
    if order == 4 && abelian {
        return IsotropyType::KleinFour;
    }
    // Dihedral: a cyclic subgroup of index 2 with every element outside it an involution.
    if order >= 6 && order.is_multiple_of(2) && !abelian {
        let m = order / 2;
        if let Some(r) = elements.iter().find(|x| element_order(*x) == m) {
            let mut rotations = BTreeSet::new();
            let mut y = r.clone();
            for _ in 0..m {
                rotations.insert(y.clone());
                y = y.compose(r);
            }
            if elements.iter().filter(|x| !rotations.contains(*x)).all(|x| element_order(x) == 2) {
                return IsotropyType::Dihedral(m);
            }
        }
    }
    IsotropyType::Other { order, element_orders: orders }
}

/// Element count per conjugacy-class label, for comparing how two subsets of a
/// common group meet its classes.
pub fn class_profile<T: GroupElement>(subset: &[T], classes: &[Vec<T>]) -> Option<BTreeMap<usize, usize>> {
    let mut profile = BTreeMap::new();
    for x in subset {
        let idx = classes.iter().position(|c| c.binary_search(x).is_ok())?;
        *profile.entry(idx).or_insert(0) += 1;
    }
    Some(profile)
}
