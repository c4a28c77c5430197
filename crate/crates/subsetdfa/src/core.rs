//! Core domain types: alphabet subsets, dictionaries, identifier lists, and
//! the automaton representation shared by the builder, minimizer, and query
//! code.
//!
//! States are indexed densely from 0 (the root). Transitions and accept
//! lists live in flat arrays grouped by state, which keeps automata with
//! tens of millions of states compact and cheap to scan.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

/// A single symbol of the integer alphabet `{0, .., sigma-1}`.
pub type Symbol = u8;
/// Dense index of a state inside an [`Automaton`].
pub type StateId = u32;
/// Index of a string inside a [`Dictionary`].
pub type StringId = u32;
/// A query string: one symbol per position.
pub type SimpleString = Vec<Symbol>;
/// One dictionary string: a non-empty alphabet subset per position.
pub type SubsetString = Vec<SymbolSet>;

/// Largest supported alphabet size. Symbol sets are one machine word of
/// bits so that membership tests stay O(1); larger alphabets are rejected
/// when a [`Dictionary`] is constructed or parsed.
pub const MAX_SIGMA: usize = 64;

/// A subset of the alphabet, stored as a bit mask (bit `c` = symbol `c`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct SymbolSet {
    mask: u64,
}

impl SymbolSet {
    pub const fn empty() -> Self {
        SymbolSet { mask: 0 }
    }

    /// The full alphabet `{0, .., sigma-1}`.
    ///
    /// Panics if `sigma` exceeds [`MAX_SIGMA`].
    pub fn full(sigma: usize) -> Self {
        assert!(sigma <= MAX_SIGMA, "alphabet size {sigma} exceeds {MAX_SIGMA}");
        if sigma == MAX_SIGMA {
            SymbolSet { mask: !0 }
        } else {
            SymbolSet { mask: (1u64 << sigma) - 1 }
        }
    }

    pub fn singleton(c: Symbol) -> Self {
        let mut s = SymbolSet::empty();
        s.insert(c);
        s
    }

    /// The inclusive range `{lo, .., hi}`.
    pub fn range(lo: Symbol, hi: Symbol) -> Self {
        assert!(lo <= hi && (hi as usize) < MAX_SIGMA);
        let width = (hi - lo + 1) as u32;
        let run = if width == 64 { !0u64 } else { (1u64 << width) - 1 };
        SymbolSet { mask: run << lo }
    }

    /// Panics if `c` is not below [`MAX_SIGMA`].
    pub fn insert(&mut self, c: Symbol) {
        assert!((c as usize) < MAX_SIGMA, "symbol {c} exceeds the {MAX_SIGMA}-bit mask");
        self.mask |= 1u64 << c;
    }

    pub fn contains(&self, c: Symbol) -> bool {
        (c as usize) < MAX_SIGMA && self.mask >> c & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    /// Highest symbol present, if any.
    pub fn max_symbol(&self) -> Option<Symbol> {
        if self.mask == 0 {
            None
        } else {
            Some((63 - self.mask.leading_zeros()) as Symbol)
        }
    }

    /// Iterates the symbols in ascending order.
    pub fn symbols(&self) -> Symbols {
        Symbols { rest: self.mask }
    }
}

impl FromIterator<Symbol> for SymbolSet {
    fn from_iter<I: IntoIterator<Item = Symbol>>(iter: I) -> Self {
        let mut s = SymbolSet::empty();
        for c in iter {
            s.insert(c);
        }
        s
    }
}

impl fmt::Debug for SymbolSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.symbols().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

/// Ascending iterator over the members of a [`SymbolSet`].
#[derive(Clone)]
pub struct Symbols {
    rest: u64,
}

impl Iterator for Symbols {
    type Item = Symbol;

    fn next(&mut self) -> Option<Symbol> {
        if self.rest == 0 {
            return None;
        }
        let c = self.rest.trailing_zeros() as Symbol;
        self.rest &= self.rest - 1;
        Some(c)
    }
}

/// Sorted, duplicate-free list of dictionary string identifiers.
///
/// Doubles as the build-time prefix list and the accept list attached to
/// states; sortedness makes equality, hashing, and diffing canonical.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IdList(Vec<StringId>);

impl IdList {
    /// Canonicalizing constructor: sorts and deduplicates.
    pub fn new(mut ids: Vec<StringId>) -> Self {
        ids.sort_unstable();
        ids.dedup();
        IdList(ids)
    }

    /// Wraps a list that is already strictly ascending.
    pub fn from_ascending(ids: Vec<StringId>) -> Self {
        debug_assert!(ids.windows(2).all(|w| w[0] < w[1]), "ids not strictly ascending");
        IdList(ids)
    }

    pub fn as_slice(&self) -> &[StringId] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<StringId> {
        self.0
    }

    pub fn contains(&self, id: StringId) -> bool {
        self.0.binary_search(&id).is_ok()
    }
}

impl std::ops::Deref for IdList {
    type Target = [StringId];

    fn deref(&self) -> &[StringId] {
        &self.0
    }
}

impl fmt::Debug for IdList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

/// Equivalence-class key for state merging during construction: two states
/// are interchangeable iff their build-time lists and depths are equal.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct EquivKey {
    pub depth: u32,
    pub list: IdList,
}

/// Validation failure for a [`Dictionary`].
#[derive(Debug, Error, PartialEq, Eq)]
pub enum DictionaryError {
    #[error("alphabet size must be at least 1")]
    SigmaZero,
    #[error("alphabet size {0} exceeds the supported maximum of {MAX_SIGMA}")]
    SigmaTooLarge(usize),
    #[error("too many strings ({0}); identifiers are 32-bit")]
    TooManyStrings(usize),
    #[error("empty subset at ({string}, {position})")]
    EmptySubset { string: usize, position: usize },
    #[error("symbol out of range at ({string}, {position}): {symbol} with sigma {sigma}")]
    SymbolOutOfRange { string: usize, position: usize, symbol: Symbol, sigma: usize },
}

/// The indexed set of subset-strings together with its alphabet size.
///
/// Identifiers are positions in the list; duplicate strings are allowed and
/// keep their own identifiers. Immutable after construction.
#[derive(Clone, PartialEq, Eq)]
pub struct Dictionary {
    sigma: usize,
    strings: Vec<SubsetString>,
}

impl Dictionary {
    /// Validates every invariant: `1 <= sigma <= 64`, every position
    /// non-empty and within the alphabet.
    pub fn new(sigma: usize, strings: Vec<SubsetString>) -> Result<Self, DictionaryError> {
        if sigma == 0 {
            return Err(DictionaryError::SigmaZero);
        }
        if sigma > MAX_SIGMA {
            return Err(DictionaryError::SigmaTooLarge(sigma));
        }
        if strings.len() > u32::MAX as usize {
            return Err(DictionaryError::TooManyStrings(strings.len()));
        }
        for (i, s) in strings.iter().enumerate() {
            for (j, set) in s.iter().enumerate() {
                if set.is_empty() {
                    return Err(DictionaryError::EmptySubset { string: i, position: j });
                }
                if let Some(max) = set.max_symbol() {
                    if max as usize >= sigma {
                        return Err(DictionaryError::SymbolOutOfRange {
                            string: i,
                            position: j,
                            symbol: max,
                            sigma,
                        });
                    }
                }
            }
        }
        Ok(Dictionary { sigma, strings })
    }

    pub fn sigma(&self) -> usize {
        self.sigma
    }

    /// Number of strings.
    pub fn len(&self) -> usize {
        self.strings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }

    pub fn strings(&self) -> &[SubsetString] {
        &self.strings
    }

    pub fn string(&self, id: StringId) -> &SubsetString {
        &self.strings[id as usize]
    }

    /// Length of the longest string (0 for an empty dictionary).
    pub fn max_len(&self) -> usize {
        self.strings.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Average subset size over all positions (NaN if there are none).
    pub fn mean_subset_size(&self) -> f64 {
        let mut positions = 0usize;
        let mut total = 0usize;
        for s in &self.strings {
            positions += s.len();
            total += s.iter().map(SymbolSet::len).sum::<usize>();
        }
        total as f64 / positions as f64
    }
}

impl fmt::Debug for Dictionary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Dictionary")
            .field("sigma", &self.sigma)
            .field("strings", &self.strings)
            .finish()
    }
}

/// Compressed-leaf label: the rest of dictionary string `string`, starting
/// at position `offset`, must be matched positionally by the query.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct LeafRef {
    pub string: StringId,
    pub offset: u32,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum AutomatonKind {
    Trie,
    PseudoMinimal,
    Minimal,
}

impl AutomatonKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            AutomatonKind::Trie => "trie",
            AutomatonKind::PseudoMinimal => "pm",
            AutomatonKind::Minimal => "min",
        }
    }
}

impl fmt::Display for AutomatonKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AutomatonKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "trie" => Ok(AutomatonKind::Trie),
            "pm" => Ok(AutomatonKind::PseudoMinimal),
            "min" => Ok(AutomatonKind::Minimal),
            other => Err(format!("unknown automaton kind `{other}`")),
        }
    }
}

/// Structural invariant violation detected while assembling or validating
/// an [`Automaton`].
#[derive(Debug, Error, PartialEq, Eq)]
pub enum AutomatonError {
    #[error("alphabet size {0} is outside 1..={MAX_SIGMA}")]
    SigmaOutOfRange(usize),
    #[error("automaton must have at least the root state")]
    NoStates,
    #[error("root state must have depth 0")]
    RootDepth,
    #[error("state id {0} out of range")]
    StateOutOfRange(StateId),
    #[error("transition symbol {symbol} out of range for sigma {sigma}")]
    TransitionSymbolOutOfRange { symbol: Symbol, sigma: usize },
    #[error("transitions of state {0} are not in canonical (source, symbol) order")]
    TransitionsOutOfOrder(StateId),
    #[error("transition target {to} of state {from} is not one level deeper")]
    DepthMismatch { from: StateId, to: StateId },
    #[error("too many transitions for 32-bit offsets ({0})")]
    TooManyTransitions(usize),
    #[error("duplicate accept id {id} on state {state}")]
    DuplicateAcceptId { state: StateId, id: StringId },
    #[error("accept id {id} on state {state} is out of range for the dictionary")]
    AcceptIdOutOfRange { state: StateId, id: StringId },
    #[error("accept id {id} on state {state} has length {len}, expected the state depth {depth}")]
    AcceptDepthMismatch { state: StateId, id: StringId, len: usize, depth: u32 },
    #[error("minimal automata carry no accept lists")]
    MinimalAcceptLists,
    #[error("minimal automata cannot be path-compressed")]
    MinimalPathCompressed,
    #[error("state {0} has a leaf label but the automaton is not path-compressed")]
    LeafWithoutPathCompression(StateId),
    #[error("state {0} has more than one leaf label")]
    DuplicateLeaf(StateId),
    #[error("leaf state {0} has outgoing transitions")]
    LeafHasTransitions(StateId),
    #[error("leaf state {0} has an accept list")]
    LeafHasAcceptList(StateId),
    #[error("leaf state {state} offset {offset} does not equal its depth")]
    LeafOffsetMismatch { state: StateId, offset: u32 },
    #[error("leaf state {state} references string {string} which is out of range")]
    LeafStringOutOfRange { state: StateId, string: StringId },
    #[error("leaf state {state} offset {offset} is not inside string {string}")]
    LeafOffsetBeyondString { state: StateId, string: StringId, offset: u32 },
    #[error("state {0} is not reachable from the root")]
    UnreachableState(StateId),
    #[error("transitions contain a cycle")]
    CyclicTransitions,
    #[error("attached dictionary has sigma {dict}, automaton has sigma {automaton}")]
    DictionarySigmaMismatch { dict: usize, automaton: usize },
}

/// Raw material for [`Automaton::from_parts`]. Produced by the builder, the
/// minimizer, and the file parser; validated in one place.
pub(crate) struct AutomatonParts {
    pub kind: AutomatonKind,
    pub path_compressed: bool,
    pub sigma: usize,
    pub depths: Vec<u32>,
    /// (source, symbol, target), grouped by source ascending with symbols
    /// strictly ascending within a source.
    pub transitions: Vec<(StateId, Symbol, StateId)>,
    /// (state, string id) accept pairs, in any order.
    pub accepts: Vec<(StateId, StringId)>,
    /// Compressed leaves, at most one per state.
    pub leaves: Vec<(StateId, LeafRef)>,
    /// Accepting states for `kind = Minimal` (which has no accept lists).
    pub accepting_states: Vec<StateId>,
    pub dict: Option<Arc<Dictionary>>,
}

/// A deterministic acyclic automaton over `{0, .., sigma-1}` recognizing
/// the simple strings that match a dictionary.
///
/// The root is always state 0. For `Trie` and `PseudoMinimal` kinds every
/// transition goes exactly one depth level down; `Minimal` automata merge
/// states across depths, so `depth` is the BFS distance from the root
/// there. Immutable after construction and safe to share across threads.
pub struct Automaton {
    kind: AutomatonKind,
    path_compressed: bool,
    sigma: usize,
    root: StateId,
    depths: Vec<u32>,
    trans: Vec<(Symbol, StateId)>,
    trans_start: Vec<u32>,
    accept_ids: Vec<StringId>,
    accept_start: Vec<u32>,
    accepting: Vec<u64>,
    leaves: HashMap<StateId, LeafRef>,
    dict: Option<Arc<Dictionary>>,
}

impl Automaton {
    pub(crate) fn from_parts(parts: AutomatonParts) -> Result<Self, AutomatonError> {
        let AutomatonParts {
            kind,
            path_compressed,
            sigma,
            depths,
            transitions,
            mut accepts,
            mut leaves,
            accepting_states,
            dict,
        } = parts;

        if sigma == 0 || sigma > MAX_SIGMA {
            return Err(AutomatonError::SigmaOutOfRange(sigma));
        }
        let n = depths.len();
        if n == 0 {
            return Err(AutomatonError::NoStates);
        }
        if depths[0] != 0 {
            return Err(AutomatonError::RootDepth);
        }
        if transitions.len() > u32::MAX as usize {
            return Err(AutomatonError::TooManyTransitions(transitions.len()));
        }
        if kind == AutomatonKind::Minimal {
            if path_compressed {
                return Err(AutomatonError::MinimalPathCompressed);
            }
            if !accepts.is_empty() {
                return Err(AutomatonError::MinimalAcceptLists);
            }
        } else {
            debug_assert!(accepting_states.is_empty());
        }

        // Transition scan: bounds, canonical order, layering.
        let layered = kind != AutomatonKind::Minimal;
        let mut prev: Option<(StateId, Symbol)> = None;
        for &(from, symbol, to) in &transitions {
            if from as usize >= n {
                return Err(AutomatonError::StateOutOfRange(from));
            }
            if to as usize >= n {
                return Err(AutomatonError::StateOutOfRange(to));
            }
            if symbol as usize >= sigma {
                return Err(AutomatonError::TransitionSymbolOutOfRange { symbol, sigma });
            }
            if let Some((pf, pc)) = prev {
                if from < pf || (from == pf && symbol <= pc) {
                    return Err(AutomatonError::TransitionsOutOfOrder(from));
                }
            }
            prev = Some((from, symbol));
            if layered && depths[to as usize] != depths[from as usize] + 1 {
                return Err(AutomatonError::DepthMismatch { from, to });
            }
        }

        // CSR assembly.
        let mut trans_start = vec![0u32; n + 1];
        let mut trans = Vec::with_capacity(transitions.len());
        let mut cursor: StateId = 0;
        for &(from, symbol, to) in &transitions {
            while cursor <= from {
                trans_start[cursor as usize] = trans.len() as u32;
                cursor += 1;
            }
            trans.push((symbol, to));
        }
        while (cursor as usize) <= n {
            trans_start[cursor as usize] = trans.len() as u32;
            cursor += 1;
        }

        // Accept lists.
        accepts.sort_unstable();
        for w in accepts.windows(2) {
            if w[0] == w[1] {
                return Err(AutomatonError::DuplicateAcceptId { state: w[1].0, id: w[1].1 });
            }
        }
        let mut accept_start = vec![0u32; n + 1];
        let mut accept_ids = Vec::with_capacity(accepts.len());
        let mut cursor: StateId = 0;
        for &(state, id) in &accepts {
            if state as usize >= n {
                return Err(AutomatonError::StateOutOfRange(state));
            }
            while cursor <= state {
                accept_start[cursor as usize] = accept_ids.len() as u32;
                cursor += 1;
            }
            accept_ids.push(id);
        }
        while (cursor as usize) <= n {
            accept_start[cursor as usize] = accept_ids.len() as u32;
            cursor += 1;
        }

        // Accepting bitmap.
        let mut accepting = vec![0u64; n.div_ceil(64)];
        if kind == AutomatonKind::Minimal {
            for &s in &accepting_states {
                if s as usize >= n {
                    return Err(AutomatonError::StateOutOfRange(s));
                }
                accepting[s as usize / 64] |= 1u64 << (s % 64);
            }
        } else {
            for s in 0..n {
                if accept_start[s] != accept_start[s + 1] {
                    accepting[s / 64] |= 1u64 << (s % 64);
                }
            }
        }

        // Leaves.
        leaves.sort_unstable_by_key(|&(s, _)| s);
        for w in leaves.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(AutomatonError::DuplicateLeaf(w[1].0));
            }
        }
        let mut leaf_map = HashMap::with_capacity(leaves.len());
        for &(state, leaf) in &leaves {
            let s = state as usize;
            if s >= n {
                return Err(AutomatonError::StateOutOfRange(state));
            }
            if !path_compressed {
                return Err(AutomatonError::LeafWithoutPathCompression(state));
            }
            if trans_start[s] != trans_start[s + 1] {
                return Err(AutomatonError::LeafHasTransitions(state));
            }
            if accept_start[s] != accept_start[s + 1] {
                return Err(AutomatonError::LeafHasAcceptList(state));
            }
            if leaf.offset != depths[s] {
                return Err(AutomatonError::LeafOffsetMismatch { state, offset: leaf.offset });
            }
            leaf_map.insert(state, leaf);
        }

        let automaton = Automaton {
            kind,
            path_compressed,
            sigma,
            root: 0,
            depths,
            trans,
            trans_start,
            accept_ids,
            accept_start,
            accepting,
            leaves: leaf_map,
            dict: None,
        };

        // Reachability, and acyclicity where layering does not imply it.
        automaton.check_reachable()?;
        if !layered {
            automaton.check_acyclic()?;
        }
        if let Some(dict) = dict {
            automaton.check_dictionary(&dict)?;
            return Ok(Automaton { dict: Some(dict), ..automaton });
        }
        Ok(automaton)
    }

    fn check_reachable(&self) -> Result<(), AutomatonError> {
        let n = self.state_count();
        let mut seen = vec![false; n];
        let mut stack = vec![self.root];
        seen[self.root as usize] = true;
        while let Some(s) = stack.pop() {
            for &(_, t) in self.transitions(s) {
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    stack.push(t);
                }
            }
        }
        match seen.iter().position(|&v| !v) {
            Some(s) => Err(AutomatonError::UnreachableState(s as StateId)),
            None => Ok(()),
        }
    }

    fn check_acyclic(&self) -> Result<(), AutomatonError> {
        let n = self.state_count();
        let mut indegree = vec![0u32; n];
        for &(_, t) in &self.trans {
            indegree[t as usize] += 1;
        }
        let mut queue: Vec<StateId> =
            (0..n as StateId).filter(|&s| indegree[s as usize] == 0).collect();
        let mut processed = 0usize;
        while let Some(s) = queue.pop() {
            processed += 1;
            for &(_, t) in self.transitions(s) {
                indegree[t as usize] -= 1;
                if indegree[t as usize] == 0 {
                    queue.push(t);
                }
            }
        }
        if processed == n {
            Ok(())
        } else {
            Err(AutomatonError::CyclicTransitions)
        }
    }

    fn check_dictionary(&self, dict: &Dictionary) -> Result<(), AutomatonError> {
        if dict.sigma() != self.sigma {
            return Err(AutomatonError::DictionarySigmaMismatch {
                dict: dict.sigma(),
                automaton: self.sigma,
            });
        }
        let n = dict.len() as u64;
        for s in 0..self.state_count() as StateId {
            for &id in self.accept_ids(s) {
                if id as u64 >= n {
                    return Err(AutomatonError::AcceptIdOutOfRange { state: s, id });
                }
                let len = dict.string(id).len();
                if len as u32 != self.depth(s) {
                    return Err(AutomatonError::AcceptDepthMismatch {
                        state: s,
                        id,
                        len,
                        depth: self.depth(s),
                    });
                }
            }
        }
        for (&state, leaf) in &self.leaves {
            if leaf.string as u64 >= n {
                return Err(AutomatonError::LeafStringOutOfRange { state, string: leaf.string });
            }
            if leaf.offset as usize >= dict.string(leaf.string).len() {
                return Err(AutomatonError::LeafOffsetBeyondString {
                    state,
                    string: leaf.string,
                    offset: leaf.offset,
                });
            }
        }
        Ok(())
    }

    /// Attaches the dictionary a path-compressed automaton was built from,
    /// enabling leaf remainder checks after loading from a file.
    pub fn attach_dictionary(&mut self, dict: Arc<Dictionary>) -> Result<(), AutomatonError> {
        self.check_dictionary(&dict)?;
        self.dict = Some(dict);
        Ok(())
    }

    pub fn kind(&self) -> AutomatonKind {
        self.kind
    }

    pub fn path_compressed(&self) -> bool {
        self.path_compressed
    }

    pub fn sigma(&self) -> usize {
        self.sigma
    }

    pub fn root(&self) -> StateId {
        self.root
    }

    pub fn state_count(&self) -> usize {
        self.depths.len()
    }

    pub fn transition_count(&self) -> usize {
        self.trans.len()
    }

    /// Depth of a state: exact path length for trie/pm kinds, BFS distance
    /// from the root for minimal automata.
    pub fn depth(&self, s: StateId) -> u32 {
        self.depths[s as usize]
    }

    pub fn max_depth(&self) -> u32 {
        self.depths.iter().copied().max().unwrap_or(0)
    }

    /// Outgoing transitions of `s`, symbol-ascending.
    pub fn transitions(&self, s: StateId) -> &[(Symbol, StateId)] {
        let lo = self.trans_start[s as usize] as usize;
        let hi = self.trans_start[s as usize + 1] as usize;
        &self.trans[lo..hi]
    }

    /// Follows the transition of `s` on `c`, if present.
    pub fn transition(&self, s: StateId, c: Symbol) -> Option<StateId> {
        let slice = self.transitions(s);
        slice.binary_search_by_key(&c, |&(sym, _)| sym).ok().map(|i| slice[i].1)
    }

    /// Accept list of `s` (empty for minimal automata).
    pub fn accept_ids(&self, s: StateId) -> &[StringId] {
        let lo = self.accept_start[s as usize] as usize;
        let hi = self.accept_start[s as usize + 1] as usize;
        &self.accept_ids[lo..hi]
    }

    pub fn is_accepting(&self, s: StateId) -> bool {
        self.accepting[s as usize / 64] >> (s % 64) & 1 == 1
    }

    pub fn accepting_count(&self) -> usize {
        self.accepting.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn leaf_ref(&self, s: StateId) -> Option<LeafRef> {
        self.leaves.get(&s).copied()
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves.len()
    }

    pub fn dictionary(&self) -> Option<&Arc<Dictionary>> {
        self.dict.as_ref()
    }

    pub fn state(&self, id: StateId) -> StateView<'_> {
        assert!((id as usize) < self.state_count());
        StateView { automaton: self, id }
    }

    pub fn states(&self) -> impl Iterator<Item = StateView<'_>> {
        (0..self.state_count() as StateId).map(|id| StateView { automaton: self, id })
    }
}

/// Structural equality; the optional dictionary attachment is not part of
/// an automaton's identity.
impl PartialEq for Automaton {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
            && self.path_compressed == other.path_compressed
            && self.sigma == other.sigma
            && self.root == other.root
            && self.depths == other.depths
            && self.trans == other.trans
            && self.trans_start == other.trans_start
            && self.accept_ids == other.accept_ids
            && self.accept_start == other.accept_start
            && self.accepting == other.accepting
            && self.leaves == other.leaves
    }
}

impl Eq for Automaton {}

impl fmt::Debug for Automaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Automaton")
            .field("kind", &self.kind)
            .field("path_compressed", &self.path_compressed)
            .field("sigma", &self.sigma)
            .field("states", &self.state_count())
            .field("transitions", &self.trans.len())
            .field("accepting", &self.accepting_count())
            .field("leaves", &self.leaves.len())
            .finish()
    }
}

/// Borrowed view of one state.
#[derive(Clone, Copy)]
pub struct StateView<'a> {
    automaton: &'a Automaton,
    id: StateId,
}

impl<'a> StateView<'a> {
    pub fn id(&self) -> StateId {
        self.id
    }

    pub fn depth(&self) -> u32 {
        self.automaton.depth(self.id)
    }

    pub fn transitions(&self) -> &'a [(Symbol, StateId)] {
        self.automaton.transitions(self.id)
    }

    pub fn transition(&self, c: Symbol) -> Option<StateId> {
        self.automaton.transition(self.id, c)
    }

    pub fn accept_ids(&self) -> &'a [StringId] {
        self.automaton.accept_ids(self.id)
    }

    pub fn is_accepting(&self) -> bool {
        self.automaton.is_accepting(self.id)
    }

    pub fn leaf_ref(&self) -> Option<LeafRef> {
        self.automaton.leaf_ref(self.id)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(symbols: &[Symbol]) -> SymbolSet {
        symbols.iter().copied().collect()
    }

    #[test]
    fn symbol_set_basics() {
        let mut s = SymbolSet::empty();
        assert!(s.is_empty());
        s.insert(3);
        s.insert(0);
        s.insert(3);
        assert_eq!(s.len(), 2);
        assert!(s.contains(0) && s.contains(3));
        assert!(!s.contains(1));
        assert!(!s.contains(200));
        assert_eq!(s.symbols().collect::<Vec<_>>(), vec![0, 3]);
        assert_eq!(s.max_symbol(), Some(3));
        assert_eq!(SymbolSet::full(64).len(), 64);
        assert_eq!(SymbolSet::full(5).mask(), 0b11111);
        assert_eq!(SymbolSet::range(2, 4), set(&[2, 3, 4]));
        assert_eq!(format!("{:?}", set(&[0, 2, 3])), "{0,2,3}");
    }

    #[test]
    fn id_list_canonicalizes() {
        let l = IdList::new(vec![3, 1, 3, 0]);
        assert_eq!(l.as_slice(), &[0, 1, 3]);
        assert!(l.contains(1));
        assert!(!l.contains(2));
        assert_eq!(IdList::from_ascending(vec![0, 5]).len(), 2);
    }

    #[test]
    fn dictionary_validation() {
        let ok = Dictionary::new(2, vec![vec![set(&[0]), set(&[0, 1])]]);
        assert!(ok.is_ok());

        let err = Dictionary::new(2, vec![vec![SymbolSet::empty(), set(&[0])]]).unwrap_err();
        assert_eq!(err, DictionaryError::EmptySubset { string: 0, position: 0 });
        assert_eq!(err.to_string(), "empty subset at (0, 0)");

        let err = Dictionary::new(2, vec![vec![set(&[2])]]).unwrap_err();
        assert!(matches!(err, DictionaryError::SymbolOutOfRange { string: 0, position: 0, symbol: 2, .. }));

        assert_eq!(Dictionary::new(0, vec![]).unwrap_err(), DictionaryError::SigmaZero);
        assert_eq!(Dictionary::new(65, vec![]).unwrap_err(), DictionaryError::SigmaTooLarge(65));
    }

    #[test]
    fn dictionary_accessors() {
        let d = Dictionary::new(4, vec![vec![set(&[0, 1]), set(&[2])], vec![], vec![set(&[3])]])
            .unwrap();
        assert_eq!(d.len(), 3);
        assert_eq!(d.max_len(), 2);
        assert_eq!(d.string(1).len(), 0);
        let mean = d.mean_subset_size();
        assert!((mean - 4.0 / 3.0).abs() < 1e-12);
    }

    fn chain_parts() -> AutomatonParts {
        // root -0-> 1 (accepting for string 0)
        AutomatonParts {
            kind: AutomatonKind::PseudoMinimal,
            path_compressed: false,
            sigma: 2,
            depths: vec![0, 1],
            transitions: vec![(0, 0, 1)],
            accepts: vec![(1, 0)],
            leaves: vec![],
            accepting_states: vec![],
            dict: None,
        }
    }

    #[test]
    fn from_parts_accepts_valid_chain() {
        let a = Automaton::from_parts(chain_parts()).unwrap();
        assert_eq!(a.state_count(), 2);
        assert_eq!(a.transition(0, 0), Some(1));
        assert_eq!(a.transition(0, 1), None);
        assert!(a.is_accepting(1));
        assert_eq!(a.accept_ids(1), &[0]);
        assert_eq!(a.accepting_count(), 1);
    }

    #[test]
    fn from_parts_rejects_depth_mismatch() {
        let mut parts = chain_parts();
        parts.depths = vec![0, 2];
        let err = Automaton::from_parts(parts).unwrap_err();
        assert_eq!(err, AutomatonError::DepthMismatch { from: 0, to: 1 });
    }

    #[test]
    fn from_parts_rejects_unreachable_state() {
        let mut parts = chain_parts();
        parts.depths.push(1);
        let err = Automaton::from_parts(parts).unwrap_err();
        assert_eq!(err, AutomatonError::UnreachableState(2));
    }

    #[test]
    fn from_parts_rejects_unsorted_transitions() {
        let mut parts = chain_parts();
        parts.depths.push(1);
        parts.transitions = vec![(0, 1, 2), (0, 0, 1)];
        let err = Automaton::from_parts(parts).unwrap_err();
        assert_eq!(err, AutomatonError::TransitionsOutOfOrder(0));
    }

    #[test]
    fn from_parts_rejects_leaf_on_uncompressed() {
        let mut parts = chain_parts();
        parts.accepts.clear();
        parts.leaves = vec![(1, LeafRef { string: 0, offset: 1 })];
        let err = Automaton::from_parts(parts).unwrap_err();
        assert_eq!(err, AutomatonError::LeafWithoutPathCompression(1));
    }

    #[test]
    fn dictionary_attachment_checks_sigma() {
        let mut a = Automaton::from_parts(chain_parts()).unwrap();
        let d = Dictionary::new(3, vec![vec![set(&[0])]]).unwrap();
        let err = a.attach_dictionary(Arc::new(d)).unwrap_err();
        assert_eq!(err, AutomatonError::DictionarySigmaMismatch { dict: 3, automaton: 2 });
        let d = Dictionary::new(2, vec![vec![set(&[0])]]).unwrap();
        a.attach_dictionary(Arc::new(d)).unwrap();
        assert!(a.dictionary().is_some());
    }
}
