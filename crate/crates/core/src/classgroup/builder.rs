//! Incremental construction of the class group from prime forms.
//!
//! The current subgroup `H` is kept as a direct sum of cyclic groups
//! `<b_1> + ... + <b_k>` with orders `d_1 >= ... >= d_k > 1`. A new form `x`
//! contributes the relation `x^e = b^c`, where `e` is the least exponent
//! putting `x` inside `H` and `c` is its discrete logarithm; the enlarged
//! relation matrix is brought to Smith form to recover a new basis.

use std::collections::HashMap;


use super::snf::smith_normal_form;
use crate::error::{Error, Result};
use crate::intcore::factor_u64;
use crate::qform::{FormInt, QForm};

/// What is known about the class number while building.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Target {
    Known(u64),
    /// The class number lies in `[lo, hi]`.
    Interval(u64, u64),
}

/// Multiplicative order of `f` given a multiple `m` of it.
pub(crate) fn order_from_multiple<T: FormInt>(f: &QForm<T>, m: u64) -> u64 {
    let mut order = m;
    for (p, _) in factor_u64(m) {
        while order % p == 0 && f.pow_u64(order / p).is_principal() {
            order /= p;
        }
    }
    order
}

type Key<T> = (T, T);

fn key<T: FormInt>(f: &QForm<T>) -> Key<T> {
    (f.a().clone(), f.b().clone())
}

struct DlogTable<T> {
    /// baby steps `b_1^i * t`, `i < step`, `t` in the tail subgroup
    baby: HashMap<Key<T>, (u64, usize)>,
    tail_coords: Vec<Vec<u64>>,
    step: u64,
    giant: QForm<T>,
}

pub(crate) struct GroupBuilder<T> {
    disc: T,
    basis: Vec<QForm<T>>,
    orders: Vec<u64>,
    table: Option<DlogTable<T>>,
}

impl<T: FormInt> GroupBuilder<T> {
    pub(crate) fn new(disc: T) -> Self {
        GroupBuilder {
            disc,
            basis: Vec::new(),
            orders: Vec::new(),
            table: None,
        }
    }

    pub(crate) fn order(&self) -> u64 {
        self.orders.iter().product()
    }

    pub(crate) fn basis(&self) -> &[QForm<T>] {
        &self.basis
    }

    pub(crate) fn orders(&self) -> &[u64] {
        &self.orders
    }

    fn identity(&self) -> QForm<T> {
        QForm::principal(&self.disc)
    }

    fn table(&mut self) -> &DlogTable<T> {
        if self.table.is_none() {
            self.table = Some(self.build_table());
        }
        self.table.as_ref().unwrap()
    }

    fn build_table(&self) -> DlogTable<T> {
        let id = self.identity();
        let (head, head_order) = match self.basis.first() {
            Some(b) => (b.clone(), self.orders[0]),
            None => (id.clone(), 1),
        };
        // enumerate the tail <b_2> + ... + <b_k>
        let mut tail: Vec<(Vec<u64>, QForm<T>)> = vec![(Vec::new(), id.clone())];
        for (b, &d) in self.basis.iter().zip(&self.orders).skip(1) {
            let mut next = Vec::with_capacity(tail.len() * d as usize);
            for (coords, t) in &tail {
                let mut cur = t.clone();
                for i in 0..d {
                    let mut c = coords.clone();
                    c.push(i);
                    next.push((c, cur.clone()));
                    cur = cur.mul(b);
                }
            }
            tail = next;
        }
        let tail_len = tail.len() as u64;
        let step = ((head_order as f64 / tail_len as f64).sqrt().ceil() as u64).clamp(1, head_order);

        let mut baby = HashMap::with_capacity((step * tail_len) as usize);
        let mut tail_coords = Vec::with_capacity(tail.len());
        for (idx, (coords, t)) in tail.into_iter().enumerate() {
            let mut cur = t;
            for i in 0..step {
                baby.entry(key(&cur)).or_insert((i, idx));
                cur = cur.mul(&head);
            }
            tail_coords.push(coords);
        }
        let giant = head.pow_u64(step).inverse();
        DlogTable {
            baby,
            tail_coords,
            step,
            giant,
        }
    }

    /// Coordinates of `z` in the current basis, or `None` if `z` is outside.
    pub(crate) fn dlog(&mut self, z: &QForm<T>) -> Option<Vec<u64>> {
        if self.basis.is_empty() {
            return z.is_principal().then(Vec::new);
        }
        let head_order = self.orders[0];
        let table = self.table();
        let giants = head_order.div_ceil(table.step);
        let mut y = z.clone();
        for j in 0..=giants {
            if let Some(&(i, idx)) = table.baby.get(&key(&y)) {
                let mut coords = vec![(i + j * table.step) % head_order];
                coords.extend_from_slice(&table.tail_coords[idx]);
                return Some(coords);
            }
            y = y.mul(&table.giant);
        }
        None
    }

    pub(crate) fn contains(&mut self, z: &QForm<T>) -> bool {
        self.dlog(z).is_some()
    }

    /// Least `e` dividing `order` with `x^e` in the subgroup.
    fn index_exponent(&mut self, x: &QForm<T>, order: u64) -> u64 {
        let mut e = order;
        for (p, _) in factor_u64(order) {
            while e % p == 0 && self.contains(&x.pow_u64(e / p)) {
                e /= p;
            }
        }
        e
    }

    /// Find `k` in `[lo, hi]` with `y^k = 1` by baby-step giant-step.
    fn annihilator_in(&self, y: &QForm<T>, lo: u64, hi: u64) -> Option<u64> {
        if lo > hi {
            return None;
        }
        let width = hi - lo + 1;
        let step = (width as f64).sqrt().ceil() as u64;
        let mut baby: HashMap<Key<T>, u64> = HashMap::with_capacity(step as usize);
        let mut cur = self.identity();
        for i in 0..step {
            baby.entry(key(&cur)).or_insert(i);
            cur = cur.mul(y);
        }
        // y^i = y^-(lo + j*step)
        let giant = cur.inverse();
        let mut g = y.pow_u64(lo).inverse();
        let mut j = 0;
        while j * step <= width {
            if let Some(&i) = baby.get(&key(&g)) {
                return Some(lo + j * step + i);
            }
            g = g.mul(&giant);
            j += 1;
        }
        None
    }

    /// Add `x` to the subgroup. Returns whether the subgroup grew.
    pub(crate) fn absorb(&mut self, x: &QForm<T>, target: Target) -> Result<bool> {
        let h_sub = self.order();
        let multiple = match target {
            Target::Known(h) => h,
            Target::Interval(lo, hi) => {
                let y = x.pow_u64(h_sub);
                if y.is_principal() {
                    h_sub
                } else {
                    let k = self
                        .annihilator_in(&y, lo.div_ceil(h_sub), hi / h_sub)
                        .ok_or_else(|| {
                            Error::CertificationFailure(format!(
                                "no multiple of the order of {x} in [{lo}, {hi}]"
                            ))
                        })?;
                    k * h_sub
                }
            }
        };
        if !x.pow_u64(multiple).is_principal() {
            return Err(Error::InvalidExponent {
                exponent: multiple.to_string(),
            });
        }
        let ord_x = order_from_multiple(x, multiple);
        let e = self.index_exponent(x, ord_x);
        if e == 1 {
            return Ok(false);
        }
        let coords = self
            .dlog(&x.pow_u64(e))
            .expect("x^e lies in the subgroup by construction");
        self.extend(x.clone(), ord_x, e, coords);
        Ok(true)
    }

    fn extend(&mut self, x: QForm<T>, ord_x: u64, e: u64, coords: Vec<u64>) {
        let k = self.basis.len();
        let n = k + 1;
        let mut rel = vec![vec![0i128; n]; n];
        for i in 0..k {
            rel[i][i] = self.orders[i] as i128;
            rel[k][i] = -(coords[i] as i128);
        }
        rel[k][k] = e as i128;

        let mut gens = std::mem::take(&mut self.basis);
        gens.push(x);
        let mut gen_orders = std::mem::take(&mut self.orders);
        gen_orders.push(ord_x);

        let snf = smith_normal_form(rel, n);
        let mut new_basis = Vec::new();
        let mut new_orders = Vec::new();
        for (row, &d) in snf.v_inv.iter().zip(&snf.diagonal) {
            if d <= 1 {
                continue;
            }
            let mut w = QForm::principal(&self.disc);
            for ((g, &o), &exp) in gens.iter().zip(&gen_orders).zip(row) {
                let exp = exp.rem_euclid(o as i128) as u64;
                if exp != 0 {
                    w = w.mul(&g.pow_u64(exp));
                }
            }
            debug_assert_eq!(order_from_multiple(&w, d as u64), d as u64);
            new_basis.push(w);
            new_orders.push(d as u64);
        }
        new_basis.reverse();
        new_orders.reverse();
        debug_assert!(new_orders.windows(2).all(|w| w[0] % w[1] == 0));
        self.basis = new_basis;
        self.orders = new_orders;
        self.table = None;
    }
}
