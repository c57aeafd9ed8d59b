//! Gini decision tree over one-hot `(feature, value)` equality tests.

use std::collections::BTreeSet;

use super::model::{Branch, NodeKind, TreeNode};
use super::NGramFeatures;
use crate::corpus::Gender;

pub(crate) struct TreeParams {
    pub max_depth: usize,
    pub min_leaf: usize,
}

/// Training rows with every `(feature, value)` test interned to an id.
/// Ids follow lexicographic `(feature, value)` order, which is also the
/// tie-break order between equally good splits.
pub(crate) struct Interned {
    tests: Vec<(String, String)>,
    rows: Vec<[u32; 6]>,
    female: Vec<bool>,
}

impl Interned {
    pub fn new(samples: &[(NGramFeatures, Gender)]) -> Self {
        let mut all = BTreeSet::new();
        for (f, _) in samples {
            for (name, value) in f.pairs() {
                all.insert((name.to_owned(), value.to_owned()));
            }
        }
        let tests: Vec<(String, String)> = all.into_iter().collect();
        let lookup = |name: &str, value: &str| {
            tests
                .binary_search_by(|(n, v)| (n.as_str(), v.as_str()).cmp(&(name, value)))
                .expect("test interned") as u32
        };
        let rows = samples
            .iter()
            .map(|(f, _)| f.pairs().map(|(n, v)| lookup(n, v)))
            .collect();
        let female = samples.iter().map(|(_, g)| *g == Gender::Female).collect();
        Interned {
            tests,
            rows,
            female,
        }
    }
}

/// Weighted Gini impurity `n * (1 - p_f^2 - p_m^2)`.
fn impurity(female: u32, male: u32) -> f64 {
    let n = f64::from(female + male);
    if n == 0.0 {
        return 0.0;
    }
    let (f, m) = (f64::from(female), f64::from(male));
    n - (f * f + m * m) / n
}

struct Grower<'a> {
    data: &'a Interned,
    params: &'a TreeParams,
    counts: Vec<[u32; 2]>,
    nodes: Vec<TreeNode>,
}

pub(crate) fn grow_tree(data: &Interned, params: &TreeParams) -> Vec<TreeNode> {
    let mut grower = Grower {
        data,
        params,
        counts: vec![[0, 0]; data.tests.len()],
        nodes: Vec::new(),
    };
    let mut idx: Vec<u32> = (0..data.rows.len() as u32).collect();
    grower.grow(&mut idx, 0, None, None);
    grower.nodes
}

impl Grower<'_> {
    fn grow(
        &mut self,
        idx: &mut [u32],
        depth: usize,
        parent: Option<usize>,
        branch: Option<Branch>,
    ) {
        let female = idx
            .iter()
            .filter(|&&i| self.data.female[i as usize])
            .count() as u32;
        let male = idx.len() as u32 - female;
        let id = self.nodes.len();

        let split = if depth < self.params.max_depth && female > 0 && male > 0 {
            self.best_split(idx, female, male)
        } else {
            None
        };

        let Some(test) = split else {
            let (label, majority) = if female >= male {
                (Gender::Female, female)
            } else {
                (Gender::Male, male)
            };
            self.nodes.push(TreeNode {
                id,
                parent,
                branch,
                kind: NodeKind::Leaf {
                    label,
                    proportion: f64::from(majority) / idx.len() as f64,
                    samples: idx.len(),
                },
            });
            return;
        };

        let (feature, value) = self.data.tests[test as usize].clone();
        self.nodes.push(TreeNode {
            id,
            parent,
            branch,
            kind: NodeKind::Split { feature, value },
        });
        let (mut yes, mut no): (Vec<u32>, Vec<u32>) = idx
            .iter()
            .partition(|&&i| self.data.rows[i as usize].contains(&test));
        self.grow(&mut yes, depth + 1, Some(id), Some(Branch::Yes));
        self.grow(&mut no, depth + 1, Some(id), Some(Branch::No));
    }

    fn best_split(&mut self, idx: &[u32], female: u32, male: u32) -> Option<u32> {
        let mut touched = Vec::new();
        for &i in idx {
            let label = usize::from(!self.data.female[i as usize]);
            for &t in &self.data.rows[i as usize] {
                let c = &mut self.counts[t as usize];
                if c[0] == 0 && c[1] == 0 {
                    touched.push(t);
                }
                c[label] += 1;
            }
        }
        touched.sort_unstable();

        let parent = impurity(female, male);
        let min_leaf = self.params.min_leaf as u32;
        let total = female + male;
        let mut best: Option<(u32, f64)> = None;
        for &t in &touched {
            let [yf, ym] = self.counts[t as usize];
            let yes = yf + ym;
            if yes < min_leaf || total - yes < min_leaf {
                continue;
            }
            let gain = parent - impurity(yf, ym) - impurity(female - yf, male - ym);
            // Strict comparison keeps the smallest test among equal gains.
            if gain > 1e-12 && best.is_none_or(|(_, g)| gain > g) {
                best = Some((t, gain));
            }
        }
        for &t in &touched {
            self.counts[t as usize] = [0, 0];
        }
        best.map(|(t, _)| t)
    }
}
