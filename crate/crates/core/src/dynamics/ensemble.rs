use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};

use super::bath::DiscreteBath;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleMember {
    /// Fock occupation of each bath mode.
    pub occupations: Vec<usize>,
    /// Boltzmann weight of the configuration (not renormalised).
    pub weight: f64,
}

/// Thermal bath state written as a mixture of Fock product states.
#[derive(Clone, Debug, PartialEq)]
pub struct ThermalEnsemble {
    pub members: Vec<EnsembleMember>,
    pub cumulative_weight: f64,
}

impl ThermalEnsemble {
    /// Mean occupation of each bath mode under the renormalised mixture.
    pub fn mean_occupations(&self, n_modes: usize) -> Vec<f64> {
        let mut out = vec![0.0; n_modes];
        for m in &self.members {
            for (o, &n) in out.iter_mut().zip(&m.occupations) {
                *o += m.weight * n as f64;
            }
        }
        out.iter_mut().for_each(|o| *o /= self.cumulative_weight);
        out
    }
}

struct Candidate {
    weight: f64,
    occupations: Vec<usize>,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Candidate {}
impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Candidate {
    // heaviest first; ties go to the lexicographically smaller configuration
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight.total_cmp(&other.weight).then_with(|| other.occupations.cmp(&self.occupations))
    }
}

/// Enumerate bath Fock configurations in decreasing Boltzmann weight until
/// the retained weight reaches `1 - weight_cutoff`.
///
/// Each mode is only populated up to `dim - 2`, so that `b^dag` acts without
/// hitting the truncation edge.
pub fn thermal_ensemble(beta: f64, bath: &DiscreteBath, weight_cutoff: f64, max_members: usize) -> Result<ThermalEnsemble> {
    if !(weight_cutoff > 0.0 && weight_cutoff <= 0.1) {
        return Err(Error::InvalidArgument(format!("weight cutoff {weight_cutoff} outside (0, 0.1]")));
    }
    if !(beta > 0.0) {
        return Err(Error::InvalidArgument(format!("beta must be positive, got {beta}")));
    }
    let n = bath.len();
    if beta.is_infinite() || n == 0 {
        return Ok(ThermalEnsemble {
            members: vec![EnsembleMember { occupations: vec![0; n], weight: 1.0 }],
            cumulative_weight: 1.0,
        });
    }
    let ratios: Vec<f64> = bath.modes().iter().map(|m| (-beta * m.frequency).exp()).collect();
    let ground: f64 = ratios.iter().map(|q| 1.0 - q).product();
    let max_occ: Vec<usize> = bath.modes().iter().map(|m| m.dim - 2).collect();

    let mut heap = BinaryHeap::new();
    let mut seen = HashSet::new();
    heap.push(Candidate { weight: ground, occupations: vec![0; n] });
    seen.insert(vec![0; n]);
    let mut members = Vec::new();
    let mut cumulative = 0.0;
    while cumulative < 1.0 - weight_cutoff {
        let Some(c) = heap.pop() else {
            return Err(Error::Truncation(format!(
                "bath dimensions hold only {cumulative:.6} of the thermal weight"
            )));
        };
        if members.len() == max_members {
            return Err(Error::EnsembleExplosion { cap: max_members });
        }
        for j in 0..n {
            if c.occupations[j] < max_occ[j] {
                let mut next = c.occupations.clone();
                next[j] += 1;
                if seen.insert(next.clone()) {
                    heap.push(Candidate { weight: c.weight * ratios[j], occupations: next });
                }
            }
        }
        cumulative += c.weight;
        members.push(EnsembleMember { occupations: c.occupations, weight: c.weight });
    }
    Ok(ThermalEnsemble { members, cumulative_weight: cumulative })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::BathMode;

    fn bath(modes: &[(f64, usize)]) -> DiscreteBath {
        DiscreteBath::new(modes.iter().map(|&(frequency, dim)| BathMode { frequency, coupling: 0.1, dim }).collect()).unwrap()
    }

    #[test]
    fn zero_temperature_single_member() {
        let e = thermal_ensemble(f64::INFINITY, &bath(&[(1.0, 3), (2.0, 3)]), 1e-3, 10).unwrap();
        assert_eq!(e.members.len(), 1);
        assert_eq!(e.members[0].weight, 1.0);
        assert_eq!(e.members[0].occupations, vec![0, 0]);
    }

    #[test]
    fn geometric_single_mode() {
        let e = thermal_ensemble(2f64.ln(), &bath(&[(1.0, 12)]), 1e-3, 100).unwrap();
        assert_eq!(e.members.len(), 10);
        for (k, m) in e.members.iter().enumerate() {
            assert_eq!(m.occupations, vec![k]);
            assert!((m.weight - 0.5f64.powi(k as i32 + 1)).abs() < 1e-15);
        }
        assert!(e.cumulative_weight >= 0.999 && e.cumulative_weight <= 1.0);
    }

    #[test]
    fn weights_sorted_and_distinct() {
        let e = thermal_ensemble(1.5, &bath(&[(0.8, 8), (1.0, 8), (1.3, 8)]), 1e-3, 1000).unwrap();
        let total: f64 = e.members.iter().map(|m| m.weight).sum();
        assert!(total <= 1.0 + 1e-15);
        assert!((total - e.cumulative_weight).abs() < 1e-15);
        for w in e.members.windows(2) {
            assert!(w[0].weight >= w[1].weight);
        }
        let set: HashSet<_> = e.members.iter().map(|m| m.occupations.clone()).collect();
        assert_eq!(set.len(), e.members.len());
        assert!(e.members.iter().all(|m| m.occupations.iter().all(|&n| n <= 6)));
    }

    #[test]
    fn errors() {
        let b = bath(&[(1.0, 3)]);
        assert!(matches!(thermal_ensemble(0.2, &b, 1e-3, 100), Err(Error::Truncation(_))));
        let big = bath(&[(1.0, 20), (1.0, 20)]);
        assert!(matches!(thermal_ensemble(0.3, &big, 1e-3, 5), Err(Error::EnsembleExplosion { cap: 5 })));
        assert!(thermal_ensemble(1.0, &b, 0.5, 100).is_err());
    }
}
