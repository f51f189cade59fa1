//! Deterministic sampling of charts, densities, fields, and forms for
//! property-style checks.
//!
//! The generator is a small hand-rolled 64-bit mixer so that seeded
//! populations stay byte-identical across toolchains and dependency
//! upgrades; statistical quality beyond that is not a goal.

use crate::jetspace::{BundleChart, FormOnY, JetCoordinate};
use crate::scalar::{ratio, Rational};
use crate::symexpr::FuncName;
use crate::symmetry::ProjectableVectorField;
use crate::variational::Lagrangian;
use crate::Expr;

/// Splittable 64-bit generator with a fixed, dependency-free stepping rule.
#[derive(Debug, Clone)]
pub struct Sampler {
    state: u64,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { state: seed }
    }

    /// Next raw 64-bit value.
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform value in `0..n`; the tiny modulo bias is irrelevant here.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "empty range");
        self.next_u64() % n
    }

    /// Uniform value in `lo..=hi`.
    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        lo + self.below((hi - lo + 1) as u64) as i64
    }

    /// True with probability `num / den`.
    pub fn chance(&mut self, num: u64, den: u64) -> bool {
        self.below(den) < num
    }

    /// A small nonzero rational with numerator in `-3..=3` and denominator
    /// in `1..=2`.
    pub fn coeff(&mut self) -> Rational {
        let mut num = self.int(-3, 3);
        if num == 0 {
            num = 1;
        }
        ratio(num, self.int(1, 2))
    }

    /// A chart with one or two base and fibre coordinates.
    pub fn chart(&mut self) -> BundleChart {
        let base: &[&str] = if self.chance(1, 2) { &["t"] } else { &["x0", "x1"] };
        let fibre: &[&str] = if self.chance(1, 2) { &["y"] } else { &["y1", "y2"] };
        BundleChart::new(base.iter().copied(), fibre.iter().copied())
            .expect("fixed name pools form valid charts")
    }

    /// A random coordinate of jet order at most `max_order`.
    fn coordinate(&mut self, chart: &BundleChart, max_order: u8) -> JetCoordinate {
        let (n, m) = (chart.base_dim() as u64, chart.fibre_dim() as u64);
        match self.below(u64::from(max_order) + 2) {
            0 => JetCoordinate::Base(self.below(n) as usize),
            1 => JetCoordinate::Fibre(self.below(m) as usize),
            2 => JetCoordinate::Jet1 {
                field: self.below(m) as usize,
                deriv: self.below(n) as usize,
            },
            _ => JetCoordinate::jet2(
                self.below(m) as usize,
                self.below(n) as usize,
                self.below(n) as usize,
            ),
        }
    }

    /// A polynomial with up to `max_terms` terms in coordinates of order at
    /// most `max_order`, each term of total degree at most `max_degree`,
    /// optionally seasoned with sine and cosine atoms.
    pub fn expr(
        &mut self,
        chart: &BundleChart,
        max_order: u8,
        max_terms: u64,
        max_degree: u32,
        allow_funcs: bool,
    ) -> Expr {
        let mut out = Expr::zero();
        let terms = self.below(max_terms) + 1;
        for _ in 0..terms {
            let mut term = Expr::constant(self.coeff());
            let mut budget = max_degree;
            for _ in 0..self.below(3) {
                if budget == 0 {
                    break;
                }
                let c = self.coordinate(chart, max_order);
                let mut factor = Expr::coordinate(c);
                if allow_funcs && c.order() == 0 && self.chance(1, 4) {
                    let name = if self.chance(1, 2) { FuncName::Sin } else { FuncName::Cos };
                    factor = Expr::func(name, factor);
                }
                let exp = 1 + self.below(u64::from(budget.min(2))) as u32;
                term = &term * &factor.pow_uint(exp);
                budget -= exp;
            }
            out = &out + &term;
        }
        out
    }

    /// A first-order Lagrangian over `chart`, of degree at most three in the
    /// coordinates.
    pub fn lagrangian(&mut self, chart: &BundleChart, allow_funcs: bool) -> Lagrangian {
        let density = self.expr(chart, 1, 4, 3, allow_funcs);
        Lagrangian::new(chart.clone(), density).expect("sampled densities are first-order")
    }

    /// A polynomial of degree at most two in the base coordinates alone.
    fn base_poly(&mut self, chart: &BundleChart, allow_funcs: bool) -> Expr {
        let n = chart.base_dim() as u64;
        let mut out = Expr::zero();
        let terms = self.below(3) + 1;
        for _ in 0..terms {
            let mut term = Expr::constant(self.coeff());
            let mut budget = 2u32;
            for _ in 0..self.below(3) {
                if budget == 0 {
                    break;
                }
                let mut factor = Expr::coordinate(JetCoordinate::Base(self.below(n) as usize));
                if allow_funcs && self.chance(1, 4) {
                    let name = if self.chance(1, 2) { FuncName::Sin } else { FuncName::Cos };
                    factor = Expr::func(name, factor);
                }
                let exp = 1 + self.below(u64::from(budget.min(2))) as u32;
                term = &term * &factor.pow_uint(exp);
                budget -= exp;
            }
            out = &out + &term;
        }
        out
    }

    /// A projectable vector field over `chart`: base components polynomial
    /// in the base coordinates, fibre components in base and fibre ones.
    pub fn projectable_field(
        &mut self,
        chart: &BundleChart,
        allow_funcs: bool,
    ) -> ProjectableVectorField {
        let mut base = Vec::new();
        for _ in 0..chart.base_dim() {
            base.push(self.base_poly(chart, allow_funcs));
        }
        let mut fibre = Vec::new();
        for _ in 0..chart.fibre_dim() {
            fibre.push(self.expr(chart, 0, 2, 2, allow_funcs));
        }
        ProjectableVectorField::new(chart.clone(), base, fibre)
            .expect("sampled components respect projectability")
    }

    /// A form on the total space of the given degree with polynomial
    /// coefficients.
    pub fn form_on_y(&mut self, chart: &BundleChart, degree: usize) -> FormOnY {
        let top = chart.base_dim() + chart.fibre_dim();
        let mut out = FormOnY::zero(chart.clone(), degree).expect("degree within range");
        let n_terms = self.below(3) + 1;
        for _ in 0..n_terms {
            // A strictly increasing word of the requested length.
            let mut word: Vec<usize> = (0..top).collect();
            for k in (1..top).rev() {
                let j = self.below(k as u64 + 1) as usize;
                word.swap(k, j);
            }
            word.truncate(degree);
            word.sort_unstable();
            let coeff = self.expr(chart, 0, 2, 3, false);
            out.add_term(&word, coeff).expect("order-0 coefficients are valid on Y");
        }
        out
    }
}
