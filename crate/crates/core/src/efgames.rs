//! Ehrenfeucht–Fraïssé games used as independent oracles for the
//! equivalence decisions elsewhere in the crate.
//!
//! Linear orders are handled through the composition property of the game:
//! once a pair of points has been matched, the remaining play splits into
//! independent games on the intervals to the left and to the right. A
//! position is therefore keyed by the pair of interval order types.

use std::collections::{BTreeSet, HashMap};

use crate::boolalg::FiniteBoolAlg;
use crate::error::{Error, Result};
use crate::ordinal::Ordinal;

pub const MAX_ORDER_RANK: usize = 6;
pub const MAX_ORDER_SIZE: u64 = 4096;
pub const MAX_ORDINAL_RANK: usize = 4;
pub const MAX_BA_RANK: usize = 3;
pub const MAX_BA_ATOMS: usize = 5;

/// Duplicator wins the `rank`-round game on the linear orders with `m` and
/// `n` elements.
pub fn ef_finite_orders(m: u64, n: u64, rank: usize) -> Result<bool> {
    if rank > MAX_ORDER_RANK {
        return Err(Error::budget(format!("rank {rank} exceeds {MAX_ORDER_RANK}")));
    }
    if m.max(n) > MAX_ORDER_SIZE {
        return Err(Error::budget(format!("order size exceeds {MAX_ORDER_SIZE}")));
    }
    // results depend only on (m, n, r), so a per-thread table is safe to reuse
    thread_local! {
        static MEMO: std::cell::RefCell<HashMap<(u64, u64, usize), bool>> = Default::default();
    }
    Ok(MEMO.with(|memo| finite_orders_rec(m, n, rank, &mut memo.borrow_mut())))
}

fn finite_orders_rec(m: u64, n: u64, r: usize, memo: &mut HashMap<(u64, u64, usize), bool>) -> bool {
    if m == n || r == 0 {
        return true;
    }
    if m == 0 || n == 0 {
        return false;
    }
    let key = (m.min(n), m.max(n), r);
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let (m, n) = (key.0, key.1);
    let answers = |m: u64, n: u64, memo: &mut HashMap<_, _>| {
        (0..m).all(|i| {
            (0..n).any(|j| {
                finite_orders_rec(i, j, r - 1, memo)
                    && finite_orders_rec(m - i - 1, n - j - 1, r - 1, memo)
            })
        })
    };
    let wins = answers(m, n, memo) && answers(n, m, memo);
    memo.insert(key, wins);
    wins
}

type TypeId = u32;

#[derive(Default)]
struct RankTable {
    sets: Vec<Vec<(TypeId, TypeId)>>,
    index: HashMap<Vec<(TypeId, TypeId)>, TypeId>,
    sums: HashMap<(TypeId, TypeId), TypeId>,
    downs: HashMap<TypeId, TypeId>,
}

/// Rank-bounded order types of linear orders.
///
/// The rank-`q` type of an order `L` is the set of pairs
/// `(type_{q-1}(L_{<a}), type_{q-1}(L_{>a}))` over `a ∈ L`; two orders are
/// `q`-equivalent exactly when their rank-`q` types coincide. Rank `0` has a
/// single type. Types are interned per rank, and the type of a concatenation
/// is computed from the types of its parts.
pub struct OrderTypes {
    max_rank: usize,
    tables: Vec<RankTable>,
    powers: HashMap<Ordinal, PowerState>,
}

/// Per-rank data for `ω^E`: the type of `ω^E` and the set of types of all
/// ordinals strictly below it.
#[derive(Clone, PartialEq, Eq, Hash)]
struct PowerState {
    power: Vec<TypeId>,
    below: Vec<BTreeSet<TypeId>>,
}

impl OrderTypes {
    pub fn new(max_rank: usize) -> Self {
        OrderTypes {
            max_rank,
            tables: (0..=max_rank).map(|_| RankTable::default()).collect(),
            powers: HashMap::new(),
        }
    }

    pub fn max_rank(&self) -> usize {
        self.max_rank
    }

    fn intern(&mut self, q: usize, mut pairs: Vec<(TypeId, TypeId)>) -> TypeId {
        debug_assert!(q > 0);
        pairs.sort_unstable();
        pairs.dedup();
        let table = &mut self.tables[q];
        if let Some(&id) = table.index.get(&pairs) {
            return id;
        }
        let id = table.sets.len() as TypeId;
        table.sets.push(pairs.clone());
        table.index.insert(pairs, id);
        id
    }

    pub fn empty(&mut self, q: usize) -> TypeId {
        if q == 0 {
            0
        } else {
            self.intern(q, Vec::new())
        }
    }

    pub fn point(&mut self, q: usize) -> TypeId {
        if q == 0 {
            return 0;
        }
        let e = self.empty(q - 1);
        self.intern(q, vec![(e, e)])
    }

    /// The rank-`(q-1)` type of an order whose rank-`q` type is `t`.
    fn down(&mut self, q: usize, t: TypeId) -> TypeId {
        debug_assert!(q > 0);
        if q == 1 {
            return 0;
        }
        if let Some(&d) = self.tables[q].downs.get(&t) {
            return d;
        }
        let d = match self.tables[q].sets[t as usize].first().copied() {
            None => self.empty(q - 1),
            Some((l, r)) => {
                let p = self.point(q - 1);
                let lp = self.sum(q - 1, l, p);
                self.sum(q - 1, lp, r)
            }
        };
        self.tables[q].downs.insert(t, d);
        d
    }

    /// Type of the concatenation `A + B`.
    pub fn sum(&mut self, q: usize, a: TypeId, b: TypeId) -> TypeId {
        if q == 0 {
            return 0;
        }
        if let Some(&s) = self.tables[q].sums.get(&(a, b)) {
            return s;
        }
        let da = self.down(q, a);
        let db = self.down(q, b);
        let left = self.tables[q].sets[a as usize].clone();
        let right = self.tables[q].sets[b as usize].clone();
        let mut pairs = Vec::with_capacity(left.len() + right.len());
        for (l, r) in left {
            let r2 = self.sum(q - 1, r, db);
            pairs.push((l, r2));
        }
        for (l, r) in right {
            let l2 = self.sum(q - 1, da, l);
            pairs.push((l2, r));
        }
        let s = self.intern(q, pairs);
        self.tables[q].sums.insert((a, b), s);
        s
    }

    pub fn repeat(&mut self, q: usize, t: TypeId, k: u64) -> TypeId {
        let mut acc = self.empty(q);
        // the sequence t·k is eventually periodic; stop early once it cycles
        let mut seen: HashMap<TypeId, u64> = HashMap::new();
        let mut i = 0;
        while i < k {
            if let Some(&j) = seen.get(&acc) {
                let period = i - j;
                let remaining = (k - i) % period;
                for _ in 0..remaining {
                    acc = self.sum(q, acc, t);
                }
                return acc;
            }
            seen.insert(acc, i);
            acc = self.sum(q, acc, t);
            i += 1;
        }
        acc
    }

    /// Type of the finite order with `n` elements.
    pub fn finite(&mut self, q: usize, n: u64) -> TypeId {
        let p = self.point(q);
        self.repeat(q, p, n)
    }

    fn base_state(&mut self) -> PowerState {
        let power = (0..=self.max_rank).map(|q| self.point(q)).collect();
        let below = (0..=self.max_rank).map(|q| BTreeSet::from([self.empty(q)])).collect();
        PowerState { power, below }
    }

    /// Types of `ω^E` for `E ≥ 1`, given the sets of types below `ω^E`.
    /// Every point of `ω^E` has a tail isomorphic to `ω^E` itself.
    fn power_from_below(&mut self, below: &[BTreeSet<TypeId>]) -> Vec<TypeId> {
        let mut power = vec![0];
        for q in 1..=self.max_rank {
            let tail = power[q - 1];
            let pairs = below[q - 1].iter().map(|&l| (l, tail)).collect();
            power.push(self.intern(q, pairs));
        }
        power
    }

    fn successor_state(&mut self, s: &PowerState) -> PowerState {
        let mut below = Vec::with_capacity(s.below.len());
        for q in 0..=self.max_rank {
            let t = s.power[q];
            let mut multiples = vec![self.empty(q)];
            loop {
                let next = self.sum(q, *multiples.last().unwrap(), t);
                if multiples.contains(&next) {
                    break;
                }
                multiples.push(next);
            }
            let mut set = BTreeSet::new();
            for &m in &multiples {
                for &x in &s.below[q] {
                    set.insert(self.sum(q, m, x));
                }
            }
            below.push(set);
        }
        let power = self.power_from_below(&below);
        PowerState { power, below }
    }

    /// State for the limit exponent following `start` (`start + ω`).
    fn limit_state(&mut self, start: &PowerState) -> PowerState {
        let mut seen = BTreeSet::new();
        let mut cur = start.clone();
        let mut union = start.below.clone();
        loop {
            let key = (cur.power.clone(), cur.below.clone());
            if !seen.insert(key) {
                break;
            }
            cur = self.successor_state(&cur);
            for (u, b) in union.iter_mut().zip(&cur.below) {
                u.extend(b.iter().copied());
            }
        }
        let power = self.power_from_below(&union);
        PowerState { power, below: union }
    }

    /// Exponents are supported below `ω^2`.
    fn power_state(&mut self, e: &Ordinal) -> Result<PowerState> {
        if let Some(s) = self.powers.get(e) {
            return Ok(s.clone());
        }
        if !e.is_finite() && e.leading_exponent() != Some(&Ordinal::one()) {
            return Err(Error::budget(format!("exponent {e} is not below w^2")));
        }
        let limits = e
            .terms()
            .iter()
            .find(|t| !t.exponent.is_zero())
            .map_or(0, |t| t.coefficient);
        let succ = e.finite_part();
        let mut state = self.base_state();
        let mut exp = Ordinal::zero();
        for _ in 0..limits {
            exp = exp.add(&Ordinal::omega());
            state = match self.powers.get(&exp) {
                Some(s) => s.clone(),
                None => self.limit_state(&state),
            };
            self.powers.insert(exp.clone(), state.clone());
        }
        for _ in 0..succ {
            exp = exp.successor();
            state = match self.powers.get(&exp) {
                Some(s) => s.clone(),
                None => self.successor_state(&state),
            };
            self.powers.insert(exp.clone(), state.clone());
        }
        Ok(state)
    }

    /// Rank-`q` type of the ordinal `a` viewed as a linear order.
    pub fn ordinal_type(&mut self, q: usize, a: &Ordinal) -> Result<TypeId> {
        assert!(q <= self.max_rank);
        let mut acc = self.empty(q);
        for t in a.terms() {
            let st = self.power_state(&t.exponent)?;
            let block = self.repeat(q, st.power[q], t.coefficient);
            acc = self.sum(q, acc, block);
        }
        Ok(acc)
    }

    pub fn ordinals_equivalent(&mut self, a: &Ordinal, b: &Ordinal, rank: usize) -> Result<bool> {
        Ok(self.ordinal_type(rank, a)? == self.ordinal_type(rank, b)?)
    }

    pub fn type_count(&self, q: usize) -> usize {
        self.tables[q].sets.len()
    }
}

fn check_ordinal_budget(a: &Ordinal) -> Result<()> {
    let bound = Ordinal::omega_pow(Ordinal::omega().successor());
    if *a >= bound {
        return Err(Error::budget(format!("{a} is not below w^w*w")));
    }
    Ok(())
}

/// Duplicator wins the `rank`-round game on `a` and `b` as linear orders.
pub fn ef_ordinals(a: &Ordinal, b: &Ordinal, rank: usize) -> Result<bool> {
    if rank > MAX_ORDINAL_RANK {
        return Err(Error::budget(format!("rank {rank} exceeds {MAX_ORDINAL_RANK}")));
    }
    check_ordinal_budget(a)?;
    check_ordinal_budget(b)?;
    OrderTypes::new(rank).ordinals_equivalent(a, b, rank)
}

/// Reusable solver for many ordinal games at ranks up to a fixed bound.
pub struct OrdinalGame {
    types: OrderTypes,
}

impl OrdinalGame {
    pub fn new(max_rank: usize) -> Result<Self> {
        if max_rank > MAX_ORDINAL_RANK {
            return Err(Error::budget(format!("rank {max_rank} exceeds {MAX_ORDINAL_RANK}")));
        }
        Ok(OrdinalGame { types: OrderTypes::new(max_rank) })
    }

    pub fn duplicator_wins(&mut self, a: &Ordinal, b: &Ordinal, rank: usize) -> Result<bool> {
        if rank > self.types.max_rank() {
            return Err(Error::budget(format!("rank {rank} exceeds solver bound")));
        }
        check_ordinal_budget(a)?;
        check_ordinal_budget(b)?;
        self.types.ordinals_equivalent(a, b, rank)
    }

    /// Smallest rank at which Spoiler wins, if any within the bound.
    pub fn distinguishing_rank(&mut self, a: &Ordinal, b: &Ordinal) -> Result<Option<usize>> {
        for r in 1..=self.types.max_rank() {
            if !self.duplicator_wins(a, b, r)? {
                return Ok(Some(r));
            }
        }
        Ok(None)
    }
}

/// Duplicator wins the `rank`-round game on two finite Boolean algebras, with
/// moves ranging over all elements of each side.
pub fn ef_finite_bas(b1: &FiniteBoolAlg, b2: &FiniteBoolAlg, rank: usize) -> Result<bool> {
    if rank > MAX_BA_RANK {
        return Err(Error::budget(format!("rank {rank} exceeds {MAX_BA_RANK}")));
    }
    if b1.atom_count().max(b2.atom_count()) > MAX_BA_ATOMS {
        return Err(Error::budget(format!("more than {MAX_BA_ATOMS} atoms")));
    }
    let mut game = BaGame { b1, b2, memo: HashMap::new() };
    Ok(game.wins(&[], &[], rank))
}

struct BaGame<'a> {
    b1: &'a FiniteBoolAlg,
    b2: &'a FiniteBoolAlg,
    memo: HashMap<(Vec<(u32, u32)>, usize), bool>,
}

impl BaGame<'_> {
    /// Sizes of the Boolean cells cut out by a tuple, indexed by sign vector.
    fn cells(b: &FiniteBoolAlg, tuple: &[u32]) -> Vec<u32> {
        (0..1u32 << tuple.len())
            .map(|signs| {
                let mut cell = b.top().bits();
                for (i, &x) in tuple.iter().enumerate() {
                    cell &= if signs >> i & 1 == 1 { x } else { !x };
                }
                cell.count_ones()
            })
            .collect()
    }

    fn wins(&mut self, left: &[u32], right: &[u32], r: usize) -> bool {
        let c1 = Self::cells(self.b1, left);
        let c2 = Self::cells(self.b2, right);
        // the map a_i ↦ b_i is a partial isomorphism iff the same cells vanish
        if c1.iter().zip(&c2).any(|(x, y)| (*x == 0) != (*y == 0)) {
            return false;
        }
        if r == 0 {
            return true;
        }
        let key = (c1.into_iter().zip(c2).collect::<Vec<_>>(), r);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let n1 = 1u32 << self.b1.atom_count();
        let n2 = 1u32 << self.b2.atom_count();
        let mut l = left.to_vec();
        let mut rt = right.to_vec();
        let mut result = true;
        'spoiler: for side in 0..2 {
            let (ns, nd) = if side == 0 { (n1, n2) } else { (n2, n1) };
            for s in 0..ns {
                let mut answered = false;
                for d in 0..nd {
                    let (x, y) = if side == 0 { (s, d) } else { (d, s) };
                    l.push(x);
                    rt.push(y);
                    let ok = self.wins(&l, &rt, r - 1);
                    l.pop();
                    rt.pop();
                    if ok {
                        answered = true;
                        break;
                    }
                }
                if !answered {
                    result = false;
                    break 'spoiler;
                }
            }
        }
        self.memo.insert(key, result);
        result
    }
}
