//! Exterior-algebra bookkeeping: labels dz_I ∧ dw_K as bitmasks over the
//! ring's variables, in lexicographic order of the ascending index tuple.
//! Signs count transpositions when factors are sorted into ascending order.

use crate::matrix::subsets_of_size;
use crate::ring::Ring;
use std::collections::HashMap;

pub type Label = u32;

pub fn label_from_indices(idx: &[usize]) -> Label {
    let mut m = 0u32;
    for &i in idx {
        m |= 1 << i;
    }
    m
}

pub fn label_indices(label: Label) -> Vec<usize> {
    (0..32).filter(|i| label >> i & 1 == 1).collect()
}

pub fn label_degree(label: Label) -> usize {
    label.count_ones() as usize
}

/// Sign of dx_i ∧ dx_S → dx_{S ∪ i} (ascending), or None if i ∈ S.
pub fn insert_sign(i: usize, label: Label) -> Option<i32> {
    if label >> i & 1 == 1 {
        return None;
    }
    let below = (label & ((1u32 << i) - 1)).count_ones();
    Some(if below % 2 == 0 { 1 } else { -1 })
}

/// Sign of dx_A ∧ dx_B → dx_{A ∪ B} (ascending), or None on overlap.
pub fn merge_sign(a: Label, b: Label) -> Option<i32> {
    if a & b != 0 {
        return None;
    }
    // inversions: pairs (x ∈ A, y ∈ B) with x > y
    let mut inv = 0u32;
    for x in label_indices(a) {
        inv += (b & ((1u32 << x) - 1)).count_ones();
    }
    Some(if inv % 2 == 0 { 1 } else { -1 })
}

/// The label basis of p-forms on a ring with N variables.
#[derive(Clone, Debug)]
pub struct FormBasis {
    nvars: usize,
    p: usize,
    labels: Vec<Label>,
    index: HashMap<Label, usize>,
}

impl FormBasis {
    pub fn new(nvars: usize, p: usize) -> Self {
        let labels: Vec<Label> = subsets_of_size(nvars, p)
            .into_iter()
            .map(|s| label_from_indices(&s))
            .collect();
        let index = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        FormBasis {
            nvars,
            p,
            labels,
            index,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.p
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> Label {
        self.labels[i]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn index_of(&self, label: Label) -> usize {
        self.index[&label]
    }

    pub fn render_label(&self, ring: &Ring, label: Label) -> String {
        render_label(ring, label)
    }
}

/// `dz[1,2]^dw[1]` style rendering shared by the CLI.
pub fn render_label(ring: &Ring, label: Label) -> String {
    let nz = ring.nz();
    let zpart: Vec<String> = label_indices(label)
        .iter()
        .filter(|&&i| i < nz)
        .map(|&i| (i + 1).to_string())
        .collect();
    let wpart: Vec<String> = label_indices(label)
        .iter()
        .filter(|&&i| i >= nz)
        .map(|&i| (i - nz + 1).to_string())
        .collect();
    let mut parts = Vec::new();
    if !zpart.is_empty() {
        parts.push(format!("dz[{}]", zpart.join(",")));
    }
    if !wpart.is_empty() {
        parts.push(format!("dw[{}]", wpart.join(",")));
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("^")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_in_lex_order() {
        let b = FormBasis::new(4, 2);
        let expect: Vec<Label> = vec![
            label_from_indices(&[0, 1]),
            label_from_indices(&[0, 2]),
            label_from_indices(&[0, 3]),
            label_from_indices(&[1, 2]),
            label_from_indices(&[1, 3]),
            label_from_indices(&[2, 3]),
        ];
        assert_eq!(b.labels(), expect.as_slice());
    }

    #[test]
    fn signs() {
        // dx1 ∧ dx0 = -dx0 ∧ dx1
        assert_eq!(insert_sign(1, label_from_indices(&[0])), Some(-1));
        assert_eq!(insert_sign(0, label_from_indices(&[1])), Some(1));
        assert_eq!(insert_sign(0, label_from_indices(&[0])), None);
        // dx{2,3} ∧ dx{0,1}: four inversions → +1
        assert_eq!(
            merge_sign(label_from_indices(&[2, 3]), label_from_indices(&[0, 1])),
            Some(1)
        );
        // dx{1} ∧ dx{0}: one inversion → −1
        assert_eq!(
            merge_sign(label_from_indices(&[1]), label_from_indices(&[0])),
            Some(-1)
        );
    }
}
