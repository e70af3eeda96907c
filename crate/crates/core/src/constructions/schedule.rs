use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::quantity::Quantity;
use super::ConstructionError;

/// Parameters of the attached tree `S_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleEntry {
    pub height: Quantity,
    pub width: Quantity,
    /// `|V(S_j)|`, all levels `0..=height` counted.
    pub tree_size: Quantity,
}

/// Heights, widths and tree sizes for a gadget graph, indexed `1..=n` as `entries[j-1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GadgetSchedule {
    pub k: u64,
    pub n: usize,
    /// Toy schedules are materializable stand-ins that ignore the growth conditions.
    pub toy: bool,
    pub entries: Vec<ScheduleEntry>,
}

/// The genuine schedule: `h_1 = 2`, `h_j = (k+2)^(2 h_{j-1}) + 1`,
/// `w_n = (k+1) n + 1`, `w_j = (k+1)(n + Σ_{i>j} |V(S_i)|) + 1`.
pub fn gadget_schedule(k: u64, n: usize) -> Result<GadgetSchedule, ConstructionError> {
    if k == 0 {
        return Err(ConstructionError::InvalidParameter("k must be at least 1".into()));
    }
    if n == 0 {
        return Err(ConstructionError::InvalidParameter("n must be at least 1".into()));
    }
    let mut heights = vec![Quantity::from_u64(2)];
    for j in 1..n {
        let prev = heights[j - 1].mul_u64(2);
        heights.push(Quantity::pow(k + 2, &prev).add_u64(1));
    }
    let mut widths = vec![Quantity::from_u64(0); n];
    let mut sizes = vec![Quantity::from_u64(0); n];
    let mut tail = Quantity::from_u64(0);
    for j in (0..n).rev() {
        widths[j] = tail.add_u64(n as u64).mul_u64(k + 1).add_u64(1);
        sizes[j] = Quantity::geometric_sum(&widths[j], &heights[j]);
        tail = tail.add(&sizes[j]);
    }
    let entries = heights
        .into_iter()
        .zip(widths)
        .zip(sizes)
        .map(|((height, width), tree_size)| ScheduleEntry { height, width, tree_size })
        .collect();
    Ok(GadgetSchedule { k, n, toy: false, entries })
}

/// A materializable schedule with the given heights and widths.
pub fn toy_schedule(
    k: u64,
    n: usize,
    heights: &[u64],
    widths: &[u64],
) -> Result<GadgetSchedule, ConstructionError> {
    if heights.len() != n || widths.len() != n {
        return Err(ConstructionError::InvalidParameter(format!(
            "expected {n} heights and widths, got {} and {}",
            heights.len(),
            widths.len()
        )));
    }
    if heights.iter().chain(widths).any(|&v| v == 0) {
        return Err(ConstructionError::InvalidParameter("toy heights and widths must be at least 1".into()));
    }
    let entries = heights
        .iter()
        .zip(widths)
        .map(|(&h, &w)| {
            let (height, width) = (Quantity::from_u64(h), Quantity::from_u64(w));
            let tree_size = Quantity::geometric_sum(&width, &height);
            ScheduleEntry { height, width, tree_size }
        })
        .collect();
    Ok(GadgetSchedule { k, n, toy: true, entries })
}

impl GadgetSchedule {
    pub fn height(&self, j: usize) -> &Quantity {
        &self.entries[j - 1].height
    }

    pub fn width(&self, j: usize) -> &Quantity {
        &self.entries[j - 1].width
    }

    pub fn tree_size(&self, j: usize) -> &Quantity {
        &self.entries[j - 1].tree_size
    }

    /// `|V(G̃)| = n + Σ_j (|V(S_j)| - 1)`.
    pub fn total_vertices(&self) -> Quantity {
        self.entries
            .iter()
            .fold(Quantity::from_u64(self.n as u64), |acc, e| match &e.tree_size {
                Quantity::Exact(s) => acc.add(&Quantity::Exact(s - BigUint::from(1u8))),
                approx => acc.add(approx),
            })
    }

    /// Invariant violations (empty when the schedule is consistent). Toy schedules
    /// are only checked for their tree sizes.
    pub fn check_invariants(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.entries.len() != self.n {
            out.push(format!("{} entries for n = {}", self.entries.len(), self.n));
            return out;
        }
        for (j, e) in self.entries.iter().enumerate() {
            let size = Quantity::geometric_sum(&e.width, &e.height);
            if let (Some(a), Some(b)) = (size.exact(), e.tree_size.exact()) {
                if a != b {
                    out.push(format!("tree size of S_{} is {b}, expected {a}", j + 1));
                }
            }
        }
        if self.toy {
            return out;
        }
        if self.entries[0].height != Quantity::from_u64(2) {
            out.push("h_1 must be 2".into());
        }
        for j in 1..self.n {
            let (prev, cur) = (&self.entries[j - 1], &self.entries[j]);
            if prev.height.partial_cmp(&cur.height) != Some(std::cmp::Ordering::Less) {
                out.push(format!("h_{} is not below h_{}", j, j + 1));
            }
            if prev.width.partial_cmp(&cur.width) != Some(std::cmp::Ordering::Greater) {
                out.push(format!("w_{} is not above w_{}", j, j + 1));
            }
            let link = Quantity::pow(self.k + 2, &prev.height.mul_u64(2));
            if let (Some(threshold), Quantity::Exact(h)) = (link.exact(), &cur.height) {
                if h - BigUint::from(1u8) < *threshold {
                    out.push(format!("h_{} - 1 is below the long-path threshold", j + 1));
                }
            }
        }
        let last = Quantity::from_u64((self.k + 1) * self.n as u64 + 1);
        if self.entries[self.n - 1].width != last {
            out.push(format!("w_n must be {last}"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn single_vertex_schedule() {
        let s = gadget_schedule(1, 1).unwrap();
        assert_eq!(s.height(1), &Quantity::from_u64(2));
        assert_eq!(s.width(1), &Quantity::from_u64(3));
        assert_eq!(s.tree_size(1), &Quantity::from_u64(13));
        assert!(s.check_invariants().is_empty());
    }

    #[test]
    fn two_vertex_schedule_matches_direct_arithmetic() {
        let s = gadget_schedule(1, 2).unwrap();
        assert_eq!(s.height(2), &Quantity::from_u64(82));
        assert_eq!(s.width(2), &Quantity::from_u64(5));
        let size2 = (big(5).pow(83) - BigUint::one()) / big(4);
        assert_eq!(s.tree_size(2).exact().unwrap(), &size2);
        let w1 = s.width(1).exact().unwrap();
        assert_eq!((w1 - BigUint::one()) / big(2) - big(2), size2);
        assert!(s.check_invariants().is_empty());
    }

    #[test]
    fn large_schedules_degrade_to_magnitudes() {
        let s = gadget_schedule(1, 3).unwrap();
        // h_3 = 3^164 + 1 is still exact
        assert_eq!(s.height(3).exact().unwrap(), &(big(3).pow(164) + BigUint::one()));
        assert!(s.tree_size(3).exact().is_none());
        assert!(s.width(1).exact().is_none());
        assert!(s.check_invariants().is_empty(), "{:?}", s.check_invariants());
    }

    #[test]
    fn toy_schedule_examples() {
        let s = toy_schedule(1, 2, &[1, 2], &[2, 2]).unwrap();
        assert_eq!(s.tree_size(1), &Quantity::from_u64(3));
        assert_eq!(s.tree_size(2), &Quantity::from_u64(7));
        let p = toy_schedule(1, 1, &[2], &[1]).unwrap();
        assert_eq!(p.tree_size(1), &Quantity::from_u64(3));
        assert!(toy_schedule(1, 2, &[1], &[1, 1]).is_err());
        assert!(toy_schedule(1, 1, &[0], &[1]).is_err());
    }

    #[test]
    fn toy_flag_round_trips_through_json() {
        for s in [toy_schedule(2, 1, &[3], &[2]).unwrap(), gadget_schedule(1, 2).unwrap()] {
            let text = serde_json::to_string(&s).unwrap();
            let back: GadgetSchedule = serde_json::from_str(&text).unwrap();
            assert_eq!(back, s);
            assert_eq!(back.toy, s.toy);
        }
    }
}
