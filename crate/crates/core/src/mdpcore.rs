//! Finite fully observable MDP machinery.
//!
//! Provides the end-component toolbox (membership check, maximal
//! end-component decomposition), qualitative solvers for almost-sure
//! reachability and almost-sure parity, and an exact quantitative
//! reachability solver used as a ground-truth oracle for the fully
//! observable special case.

use std::collections::BTreeMap;

use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::Rational;

/// Errors raised while constructing a [`FiniteMdp`].
#[derive(Debug, Error)]
pub enum MdpError {
    #[error("row ({state},{action}) sums to {sum}, expected 1")]
    RowSum {
        state: String,
        action: String,
        sum: Rational,
    },
    #[error("row ({state},{action}) lists a nonpositive probability")]
    NonpositiveProbability { state: String, action: String },
    #[error("state {state} has no enabled action")]
    NoEnabledAction { state: String },
    #[error("index out of range: {0}")]
    IndexRange(String),
}

/// A finite MDP with rational transition rows.
///
/// Rows are sparse `(successor, probability)` lists; a missing row means
/// the action is disabled in that state. Every state must keep at least
/// one enabled action.
#[derive(Debug, Clone)]
pub struct FiniteMdp {
    state_names: Vec<String>,
    action_names: Vec<String>,
    rows: Vec<Option<Vec<(usize, Rational)>>>, // indexed by state * n_actions + action
}

impl FiniteMdp {
    /// Create an MDP with all actions disabled; fill rows with [`FiniteMdp::set_row`].
    pub fn new(state_names: Vec<String>, action_names: Vec<String>) -> Self {
        let rows = vec![None; state_names.len() * action_names.len()];
        FiniteMdp {
            state_names,
            action_names,
            rows,
        }
    }

    pub fn n_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn n_actions(&self) -> usize {
        self.action_names.len()
    }

    pub fn state_name(&self, q: usize) -> &str {
        &self.state_names[q]
    }

    pub fn action_name(&self, a: usize) -> &str {
        &self.action_names[a]
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.state_names.iter().position(|s| s == name)
    }

    pub fn action_index(&self, name: &str) -> Option<usize> {
        self.action_names.iter().position(|s| s == name)
    }

    /// Install the distribution of `(state, action)`. Entries must be
    /// positive and sum to exactly one.
    pub fn set_row(
        &mut self,
        state: usize,
        action: usize,
        entries: Vec<(usize, Rational)>,
    ) -> Result<(), MdpError> {
        if state >= self.n_states() || action >= self.n_actions() {
            return Err(MdpError::IndexRange(format!("({state},{action})")));
        }
        let mut sum = Rational::zero();
        for (succ, p) in &entries {
            if *succ >= self.n_states() {
                return Err(MdpError::IndexRange(format!("successor {succ}")));
            }
            if *p <= Rational::zero() {
                return Err(MdpError::NonpositiveProbability {
                    state: self.state_names[state].clone(),
                    action: self.action_names[action].clone(),
                });
            }
            sum += p;
        }
        if !sum.is_one() {
            return Err(MdpError::RowSum {
                state: self.state_names[state].clone(),
                action: self.action_names[action].clone(),
                sum,
            });
        }
        self.rows[state * self.n_actions() + action] = Some(entries);
        Ok(())
    }

    /// Fails if some state has no enabled action.
    pub fn validate(&self) -> Result<(), MdpError> {
        for q in 0..self.n_states() {
            if self.enabled_actions(q).next().is_none() {
                return Err(MdpError::NoEnabledAction {
                    state: self.state_names[q].clone(),
                });
            }
        }
        Ok(())
    }

    pub fn row(&self, state: usize, action: usize) -> Option<&[(usize, Rational)]> {
        self.rows[state * self.n_actions() + action].as_deref()
    }

    pub fn enabled_actions(&self, state: usize) -> impl Iterator<Item = usize> + '_ {
        let n = self.n_actions();
        (0..n).filter(move |a| self.rows[state * n + a].is_some())
    }

    /// True when every successor of `(state, action)` lies in `within`.
    fn row_stays_within(&self, state: usize, action: usize, within: &[bool]) -> bool {
        match self.row(state, action) {
            Some(row) => row.iter().all(|(succ, _)| within[*succ]),
            None => false,
        }
    }
}

/// An end component `(Q, E)`: action-closed and strongly connected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndComponent {
    /// Member states, sorted.
    pub states: Vec<usize>,
    /// For each member state, the nonempty retained action set, sorted.
    pub actions: BTreeMap<usize, Vec<usize>>,
}

impl EndComponent {
    pub fn contains(&self, other: &EndComponent) -> bool {
        other.states.iter().all(|q| self.states.binary_search(q).is_ok())
            && other.actions.iter().all(|(q, acts)| {
                self.actions
                    .get(q)
                    .is_some_and(|mine| acts.iter().all(|a| mine.contains(a)))
            })
    }
}

/// Check the two defining conditions of an end component.
pub fn is_end_component(mdp: &FiniteMdp, candidate: &EndComponent) -> bool {
    if candidate.states.is_empty() {
        return false;
    }
    let mut member = vec![false; mdp.n_states()];
    for &q in &candidate.states {
        if q >= mdp.n_states() {
            return false;
        }
        member[q] = true;
    }
    // every member needs a nonempty action set; all listed actions must be
    // enabled and closed
    for &q in &candidate.states {
        let Some(acts) = candidate.actions.get(&q) else {
            return false;
        };
        if acts.is_empty() {
            return false;
        }
        for &a in acts {
            if a >= mdp.n_actions() || !mdp.row_stays_within(q, a, &member) {
                return false;
            }
        }
    }
    strongly_connected(mdp, &candidate.states, |q, a| {
        candidate.actions.get(&q).is_some_and(|acts| acts.contains(&a))
    })
}

/// Strong connectivity of the graph induced on `states` by the edges of
/// the actions admitted by `keep`.
fn strongly_connected<F>(mdp: &FiniteMdp, states: &[usize], keep: F) -> bool
where
    F: Fn(usize, usize) -> bool,
{
    if states.len() <= 1 {
        return true;
    }
    let mut member = vec![false; mdp.n_states()];
    for &q in states {
        member[q] = true;
    }
    let succs = |q: usize| -> Vec<usize> {
        let mut out = Vec::new();
        for a in mdp.enabled_actions(q) {
            if keep(q, a) {
                for (succ, _) in mdp.row(q, a).unwrap() {
                    if member[*succ] {
                        out.push(*succ);
                    }
                }
            }
        }
        out
    };
    // forward reachability from the first member
    let root = states[0];
    let forward = bfs(mdp.n_states(), root, |q| succs(q));
    if states.iter().any(|q| !forward[*q]) {
        return false;
    }
    // backward reachability: precompute reverse adjacency
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); mdp.n_states()];
    for &q in states {
        for succ in succs(q) {
            preds[succ].push(q);
        }
    }
    let backward = bfs(mdp.n_states(), root, |q| preds[q].clone());
    states.iter().all(|q| backward[*q])
}

fn bfs<F>(n: usize, root: usize, succs: F) -> Vec<bool>
where
    F: Fn(usize) -> Vec<usize>,
{
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut stack = vec![root];
    while let Some(q) = stack.pop() {
        for succ in succs(q) {
            if !seen[succ] {
                seen[succ] = true;
                stack.push(succ);
            }
        }
    }
    seen
}

/// Maximal end components of the full MDP.
pub fn mec_decomposition(mdp: &FiniteMdp) -> Vec<EndComponent> {
    let alive = vec![true; mdp.n_states()];
    mec_decomposition_within(mdp, &alive)
}

/// Maximal end components of the sub-MDP restricted to `alive` states
/// (actions whose support leaves `alive` are dropped).
///
/// Iterative SCC refinement: restrict each candidate set to actions that
/// stay inside it, drop states left without actions, split into strongly
/// connected components, and repeat until the candidates stabilize.
pub fn mec_decomposition_within(mdp: &FiniteMdp, alive: &[bool]) -> Vec<EndComponent> {
    let initial: Vec<usize> = (0..mdp.n_states()).filter(|q| alive[*q]).collect();
    let mut queue = vec![initial];
    let mut mecs: Vec<EndComponent> = Vec::new();

    while let Some(mut cand) = queue.pop() {
        if cand.is_empty() {
            continue;
        }
        let mut member = vec![false; mdp.n_states()];
        for &q in &cand {
            member[q] = true;
        }
        // prune states with no internal action until stable
        loop {
            let mut changed = false;
            cand.retain(|&q| {
                let has = mdp
                    .enabled_actions(q)
                    .any(|a| mdp.row_stays_within(q, a, &member));
                if !has {
                    member[q] = false;
                    changed = true;
                }
                has
            });
            if !changed {
                break;
            }
        }
        if cand.is_empty() {
            continue;
        }
        let allowed = |q: usize| -> Vec<usize> {
            mdp.enabled_actions(q)
                .filter(|&a| mdp.row_stays_within(q, a, &member))
                .collect()
        };
        let comps = scc_partition(mdp, &cand, &member);
        if comps.len() == 1 && comps[0].len() == cand.len() {
            let mut actions = BTreeMap::new();
            for &q in &cand {
                actions.insert(q, allowed(q));
            }
            let mut states = cand;
            states.sort_unstable();
            mecs.push(EndComponent { states, actions });
        } else {
            queue.extend(comps);
        }
    }
    mecs.sort_by(|a, b| a.states.cmp(&b.states));
    mecs
}

/// Strongly connected components of the graph induced on `cand` through
/// actions closed within `member` (Kosaraju, iterative).
fn scc_partition(mdp: &FiniteMdp, cand: &[usize], member: &[bool]) -> Vec<Vec<usize>> {
    let n = mdp.n_states();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut radj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &q in cand {
        for a in mdp.enabled_actions(q) {
            if mdp.row_stays_within(q, a, member) {
                for (succ, _) in mdp.row(q, a).unwrap() {
                    adj[q].push(*succ);
                    radj[*succ].push(q);
                }
            }
        }
    }
    // first pass: finish order
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(cand.len());
    for &root in cand {
        if visited[root] {
            continue;
        }
        let mut stack = vec![(root, 0usize)];
        visited[root] = true;
        while let Some(&mut (q, ref mut i)) = stack.last_mut() {
            if *i < adj[q].len() {
                let succ = adj[q][*i];
                *i += 1;
                if !visited[succ] {
                    visited[succ] = true;
                    stack.push((succ, 0));
                }
            } else {
                order.push(q);
                stack.pop();
            }
        }
    }
    // second pass on the reverse graph
    let mut comp = vec![usize::MAX; n];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for &root in order.iter().rev() {
        if comp[root] != usize::MAX {
            continue;
        }
        let id = comps.len();
        let mut members = vec![root];
        comp[root] = id;
        let mut stack = vec![root];
        while let Some(q) = stack.pop() {
            for &p in &radj[q] {
                if comp[p] == usize::MAX {
                    comp[p] = id;
                    members.push(p);
                    stack.push(p);
                }
            }
        }
        comps.push(members);
    }
    comps
}

/// A positional strategy: one choice per state inside its domain.
#[derive(Debug, Clone)]
pub enum ActionChoice {
    Pure(usize),
    /// Uniform randomization over the listed actions.
    Uniform(Vec<usize>),
}

#[derive(Debug, Clone)]
pub struct MemorylessStrategy {
    /// Indexed by state; `None` outside the strategy's domain.
    pub choices: Vec<Option<ActionChoice>>,
}

impl MemorylessStrategy {
    pub fn empty(n_states: usize) -> Self {
        MemorylessStrategy {
            choices: vec![None; n_states],
        }
    }

    /// Resolve the choice at `state` with a uniform variate in `[0,1)`.
    pub fn pick(&self, state: usize, u: f64) -> Option<usize> {
        match self.choices[state].as_ref()? {
            ActionChoice::Pure(a) => Some(*a),
            ActionChoice::Uniform(set) => {
                let i = ((u * set.len() as f64) as usize).min(set.len() - 1);
                Some(set[i])
            }
        }
    }
}

/// States with a positive-probability path to `target` (any actions).
pub fn positive_reach(mdp: &FiniteMdp, target: &[bool]) -> Vec<bool> {
    let mut reach = target.to_vec();
    loop {
        let mut changed = false;
        for q in 0..mdp.n_states() {
            if reach[q] {
                continue;
            }
            let hits = mdp.enabled_actions(q).any(|a| {
                mdp.row(q, a)
                    .unwrap()
                    .iter()
                    .any(|(succ, _)| reach[*succ])
            });
            if hits {
                reach[q] = true;
                changed = true;
            }
        }
        if !changed {
            return reach;
        }
    }
}

/// Maximal almost-sure reachability winning set with a positional witness.
///
/// Double fixpoint: restrict to actions that cannot escape the current
/// candidate, keep the states that can still make positive-probability
/// progress to the target, repeat. The witness plays, in each winning
/// non-target state, the first action that shortens the distance to the
/// target inside the final restriction.
pub fn almost_sure_reach(mdp: &FiniteMdp, target: &[bool]) -> (Vec<bool>, MemorylessStrategy) {
    let n = mdp.n_states();
    let mut w = vec![true; n];
    loop {
        // positive backward reach of target within w, via actions closed in w
        let mut p: Vec<bool> = (0..n).map(|q| w[q] && target[q]).collect();
        loop {
            let mut changed = false;
            for q in 0..n {
                if !w[q] || p[q] {
                    continue;
                }
                let ok = mdp.enabled_actions(q).any(|a| {
                    mdp.row_stays_within(q, a, &w)
                        && mdp.row(q, a).unwrap().iter().any(|(succ, _)| p[*succ])
                });
                if ok {
                    p[q] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        if p == w {
            break;
        }
        w = p;
    }

    // distance layers toward target inside the final restriction
    let mut strategy = MemorylessStrategy::empty(n);
    let mut dist = vec![usize::MAX; n];
    for q in 0..n {
        if w[q] && target[q] {
            dist[q] = 0;
            strategy.choices[q] = mdp.enabled_actions(q).next().map(ActionChoice::Pure);
        }
    }
    loop {
        let mut changed = false;
        for q in 0..n {
            if !w[q] || dist[q] != usize::MAX {
                continue;
            }
            for a in mdp.enabled_actions(q) {
                if !mdp.row_stays_within(q, a, &w) {
                    continue;
                }
                if mdp
                    .row(q, a)
                    .unwrap()
                    .iter()
                    .any(|(succ, _)| dist[*succ] != usize::MAX)
                {
                    dist[q] = 1;
                    strategy.choices[q] = Some(ActionChoice::Pure(a));
                    changed = true;
                    break;
                }
            }
        }
        if !changed {
            break;
        }
    }
    (w, strategy)
}

/// Maximal almost-sure parity winning set with a positional witness.
///
/// For each even priority `c`, the states inside an end component of the
/// sub-MDP restricted to priorities `>= c` whose minimum priority is `c`
/// form the recurrent core; the winning set is the almost-sure attractor
/// of the union of those cores. Inside a core the witness randomizes
/// uniformly over the retained actions, which visits the whole component
/// almost surely.
pub fn almost_sure_parity(
    mdp: &FiniteMdp,
    priorities: &[u32],
) -> (Vec<bool>, MemorylessStrategy) {
    assert_eq!(priorities.len(), mdp.n_states());
    let n = mdp.n_states();
    let d = priorities.iter().copied().max().unwrap_or(0);
    let mut core = vec![false; n];
    let mut core_choice: Vec<Option<ActionChoice>> = vec![None; n];

    let mut c = 0u32;
    while c <= d {
        let alive: Vec<bool> = (0..n).map(|q| priorities[q] >= c).collect();
        for mec in mec_decomposition_within(mdp, &alive) {
            let min_p = mec.states.iter().map(|q| priorities[*q]).min().unwrap();
            if min_p == c {
                for (&q, acts) in &mec.actions {
                    if !core[q] {
                        core[q] = true;
                        core_choice[q] = Some(ActionChoice::Uniform(acts.clone()));
                    }
                }
            }
        }
        c += 2;
    }

    let (winning, reach_strategy) = almost_sure_reach(mdp, &core);
    let mut strategy = MemorylessStrategy::empty(n);
    for q in 0..n {
        if !winning[q] {
            continue;
        }
        strategy.choices[q] = if core[q] {
            core_choice[q].clone()
        } else {
            reach_strategy.choices[q].clone()
        };
    }
    (winning, strategy)
}

/// Maximum reachability probabilities, one entry per state.
///
/// Routed to the exact rational solver for instances up to 200 states,
/// otherwise to float value iteration at tolerance `1e-10`. Both paths
/// operate on the maximal-end-component quotient, where the Bellman
/// system has a unique solution.
pub fn quantitative_reach(mdp: &FiniteMdp, target: &[bool]) -> Vec<f64> {
    if mdp.n_states() <= 200 {
        quantitative_reach_exact(mdp, target)
            .iter()
            .map(|v| v.to_f64().unwrap_or(f64::NAN))
            .collect()
    } else {
        let quotient = ReachQuotient::build(mdp, target);
        let vals = quotient.value_iteration(1e-10);
        (0..mdp.n_states())
            .map(|q| match quotient.node_of[q] {
                NodeRef::Good => 1.0,
                NodeRef::Zero => 0.0,
                NodeRef::Transient(i) => vals[i],
            })
            .collect()
    }
}

/// Exact maximum reachability probabilities via policy iteration on the
/// MEC quotient.
pub fn quantitative_reach_exact(mdp: &FiniteMdp, target: &[bool]) -> Vec<Rational> {
    let quotient = ReachQuotient::build(mdp, target);
    let vals = quotient.policy_iteration();
    (0..mdp.n_states())
        .map(|q| match quotient.node_of[q] {
            NodeRef::Good => Rational::one(),
            NodeRef::Zero => Rational::zero(),
            NodeRef::Transient(i) => vals[i].clone(),
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum NodeRef {
    Good,
    Zero,
    Transient(usize),
}

/// One quotient action: probability of absorbing at the target side plus
/// the distribution over transient nodes.
struct QuotientAction {
    good: Rational,
    succs: Vec<(usize, Rational)>,
}

/// MEC quotient of a reachability instance. Target states (and states
/// sharing an end component with a target) collapse to an absorbing
/// value-1 node; states without a positive path to the target collapse to
/// an absorbing value-0 node; every remaining MEC collapses to one node
/// that keeps only its leaving actions. The quotient has no end
/// components outside the two absorbing nodes, so every policy is proper.
struct ReachQuotient {
    node_of: Vec<NodeRef>,
    actions: Vec<Vec<QuotientAction>>, // per transient node
}

impl ReachQuotient {
    fn build(mdp: &FiniteMdp, target: &[bool]) -> Self {
        let n = mdp.n_states();
        let pos = positive_reach(mdp, target);
        let mecs = mec_decomposition(mdp);

        let mut node_of = vec![NodeRef::Zero; n];
        let mut mec_of = vec![usize::MAX; n];
        for (i, mec) in mecs.iter().enumerate() {
            for &q in &mec.states {
                mec_of[q] = i;
            }
        }
        let mec_has_target: Vec<bool> = mecs
            .iter()
            .map(|m| m.states.iter().any(|q| target[*q]))
            .collect();

        // assign nodes
        let mut transient_nodes: Vec<Vec<usize>> = Vec::new(); // member states per node
        let mut mec_node = vec![usize::MAX; mecs.len()];
        for q in 0..n {
            if target[q] || (mec_of[q] != usize::MAX && mec_has_target[mec_of[q]]) {
                node_of[q] = NodeRef::Good;
            } else if !pos[q] {
                node_of[q] = NodeRef::Zero;
            } else if mec_of[q] != usize::MAX {
                let m = mec_of[q];
                if mec_node[m] == usize::MAX {
                    mec_node[m] = transient_nodes.len();
                    transient_nodes.push(Vec::new());
                }
                node_of[q] = NodeRef::Transient(mec_node[m]);
                transient_nodes[mec_node[m]].push(q);
            } else {
                node_of[q] = NodeRef::Transient(transient_nodes.len());
                transient_nodes.push(vec![q]);
            }
        }

        let mut actions: Vec<Vec<QuotientAction>> = vec![Vec::new(); transient_nodes.len()];
        for (node, members) in transient_nodes.iter().enumerate() {
            let in_mec = members.len() > 1 || {
                let q = members[0];
                mec_of[q] != usize::MAX
            };
            for &q in members {
                for a in mdp.enabled_actions(q) {
                    // inside a MEC keep only leaving actions
                    if in_mec {
                        let m = mec_of[q];
                        let stays = mdp.row(q, a).unwrap().iter().all(|(s, _)| {
                            mec_of[*s] == m
                        });
                        if stays {
                            continue;
                        }
                    }
                    let mut good = Rational::zero();
                    let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
                    for (succ, p) in mdp.row(q, a).unwrap() {
                        match node_of[*succ] {
                            NodeRef::Good => good += p,
                            NodeRef::Zero => {}
                            NodeRef::Transient(t) => {
                                *acc.entry(t).or_insert_with(Rational::zero) += p;
                            }
                        }
                    }
                    actions[node].push(QuotientAction {
                        good,
                        succs: acc.into_iter().collect(),
                    });
                }
            }
            debug_assert!(
                !actions[node].is_empty(),
                "transient quotient node without actions"
            );
        }

        ReachQuotient { node_of, actions }
    }

    /// Exact policy iteration. All policies are proper on the quotient,
    /// so each evaluation is a nonsingular rational linear solve; strict
    /// improvement guarantees termination.
    fn policy_iteration(&self) -> Vec<Rational> {
        let m = self.actions.len();
        if m == 0 {
            return Vec::new();
        }
        let mut policy: Vec<usize> = vec![0; m];
        loop {
            let values = self.evaluate(&policy);
            let mut improved = false;
            for node in 0..m {
                let mut best = values[node].clone();
                let mut best_a = policy[node];
                for (a, qa) in self.actions[node].iter().enumerate() {
                    let mut v = qa.good.clone();
                    for (succ, p) in &qa.succs {
                        v += p * &values[*succ];
                    }
                    if v > best {
                        best = v;
                        best_a = a;
                    }
                }
                if best_a != policy[node] {
                    policy[node] = best_a;
                    improved = true;
                }
            }
            if !improved {
                return values;
            }
        }
    }

    /// Solve `(I - P) v = g` for the chosen policy by Gaussian elimination.
    fn evaluate(&self, policy: &[usize]) -> Vec<Rational> {
        let m = self.actions.len();
        let mut mat: Vec<Vec<Rational>> = vec![vec![Rational::zero(); m + 1]; m];
        for node in 0..m {
            let qa = &self.actions[node][policy[node]];
            mat[node][node] = Rational::one();
            for (succ, p) in &qa.succs {
                mat[node][*succ] -= p;
            }
            mat[node][m] = qa.good.clone();
        }
        for col in 0..m {
            let pivot = (col..m)
                .find(|r| !mat[*r][col].is_zero())
                .expect("proper policy yields a nonsingular system");
            mat.swap(col, pivot);
            let inv = mat[col][col].clone();
            for x in mat[col][col..].iter_mut() {
                *x /= &inv;
            }
            for r in 0..m {
                if r != col && !mat[r][col].is_zero() {
                    let f = mat[r][col].clone();
                    for c in col..=m {
                        let delta = &f * &mat[col][c];
                        mat[r][c] -= delta;
                    }
                }
            }
        }
        (0..m).map(|r| mat[r][m].clone()).collect()
    }

    fn value_iteration(&self, tol: f64) -> Vec<f64> {
        let m = self.actions.len();
        let acts: Vec<Vec<(f64, Vec<(usize, f64)>)>> = self
            .actions
            .iter()
            .map(|list| {
                list.iter()
                    .map(|qa| {
                        (
                            qa.good.to_f64().unwrap_or(0.0),
                            qa.succs
                                .iter()
                                .map(|(s, p)| (*s, p.to_f64().unwrap_or(0.0)))
                                .collect(),
                        )
                    })
                    .collect()
            })
            .collect();
        let mut v = vec![0.0f64; m];
        loop {
            let mut diff = 0.0f64;
            let mut next = vec![0.0f64; m];
            for node in 0..m {
                let mut best = 0.0f64;
                for (good, succs) in &acts[node] {
                    let mut x = *good;
                    for (s, p) in succs {
                        x += p * v[*s];
                    }
                    best = best.max(x);
                }
                diff = diff.max((best - v[node]).abs());
                next[node] = best;
            }
            v = next;
            if diff < tol {
                return v;
            }
        }
    }
}
