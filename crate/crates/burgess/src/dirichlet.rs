//! Dirichlet characters mod q: construction from generator exponents,
//! quadratic characters via the Jacobi symbol, exact evaluation, conductor
//! and primitivity.
//!
//! Two evaluation modes. Table mode precomputes discrete logarithms per CRT
//! component (O(q) memory, q <= 10^7) and evaluates characters of any order
//! exactly as roots of unity. Quadratic mode evaluates through the Jacobi
//! symbol in O(log^2 q) per call with no table, so q can be large; it is the
//! default for campaign runs over prime moduli, where it is always primitive.

use std::sync::Arc;

use num_complex::Complex64;

use crate::arith::{self, RootOfUnity};
use crate::error::{Error, Result};

/// Largest modulus accepted in table mode.
pub const TABLE_MODULUS_CAP: u64 = 10_000_000;
/// Largest modulus for full character enumeration.
pub const ENUMERATION_CAP: u64 = 10_000;

/// One CRT component p^a of the modulus with its unit-group generators and
/// a discrete-log table (one entry per generator, u32::MAX on non-units).
#[derive(Debug)]
struct Component {
    modulus: u64,
    /// Generator orders; length 0, 1, or 2 (two for 2^a with a >= 3).
    orders: Vec<u64>,
    /// Flattened dlog table: `dlog[x * orders.len() + i]`.
    dlog: Vec<u32>,
}

impl Component {
    fn new_odd(p: u64, a: u32) -> Self {
        let modulus = p.pow(a);
        let g = arith::primitive_root(p, a).expect("odd prime component");
        let order = modulus / p * (p - 1);
        let mut dlog = vec![u32::MAX; modulus as usize];
        let mut x = 1u64;
        for t in 0..order {
            dlog[x as usize] = t as u32;
            x = (x as u128 * g as u128 % modulus as u128) as u64;
        }
        Component {
            modulus,
            orders: vec![order],
            dlog,
        }
    }

    /// Component for 2^a. Trivial for a <= 1; cyclic on {-1} for a = 2;
    /// generated by {-1, 5} for a >= 3.
    fn new_two(a: u32) -> Self {
        let modulus = 2u64.pow(a);
        match a {
            0 | 1 => Component {
                modulus,
                orders: vec![],
                dlog: vec![u32::MAX; modulus as usize],
            },
            2 => {
                let mut dlog = vec![u32::MAX; 4];
                dlog[1] = 0;
                dlog[3] = 1;
                Component {
                    modulus,
                    orders: vec![2],
                    dlog,
                }
            }
            _ => {
                let half_order = modulus / 4; // order of 5
                let mut dlog = vec![u32::MAX; 2 * modulus as usize];
                for s in 0..2u64 {
                    let mut x = if s == 0 { 1 } else { modulus - 1 };
                    for t in 0..half_order {
                        dlog[2 * x as usize] = s as u32;
                        dlog[2 * x as usize + 1] = t as u32;
                        x = x * 5 % modulus;
                    }
                }
                Component {
                    modulus,
                    orders: vec![2, half_order],
                    dlog,
                }
            }
        }
    }

    fn dlogs(&self, x: u64) -> Option<&[u32]> {
        let k = self.orders.len();
        if k == 0 {
            // Units exist (1, and 1 only for modulus 2) but the group is trivial.
            return if arith::gcd(x % self.modulus, self.modulus) == 1 {
                Some(&[])
            } else {
                None
            };
        }
        let base = (x % self.modulus) as usize * k;
        if self.dlog[base] == u32::MAX {
            None
        } else {
            Some(&self.dlog[base..base + k])
        }
    }
}

/// Shared unit-group structure for a fixed modulus; characters mod q hold an
/// `Arc` to one of these.
#[derive(Debug)]
pub struct UnitStructure {
    q: u64,
    components: Vec<Component>,
    /// Generator orders flattened across components.
    orders: Vec<u64>,
}

impl UnitStructure {
    pub fn new(q: u64) -> Result<Arc<Self>> {
        if q > TABLE_MODULUS_CAP {
            return Err(Error::ModulusTooLarge {
                q,
                cap: TABLE_MODULUS_CAP,
            });
        }
        let mut components = Vec::new();
        for &(p, a) in &arith::factorize(q).factors {
            components.push(if p == 2 {
                Component::new_two(a)
            } else {
                Component::new_odd(p, a)
            });
        }
        let orders = components
            .iter()
            .flat_map(|c| c.orders.iter().copied())
            .collect();
        Ok(Arc::new(UnitStructure {
            q,
            components,
            orders,
        }))
    }

    /// Orders of the unit-group generators, in component order.
    pub fn generator_orders(&self) -> &[u64] {
        &self.orders
    }
}

#[derive(Debug, Clone)]
enum Kind {
    /// chi(n) = jacobi(n | q); odd q only, no table, any size.
    Quadratic,
    /// Exponents against the shared generator set.
    Table {
        structure: Arc<UnitStructure>,
        exponents: Vec<u64>,
        /// lcm of the generator orders; common denominator during evaluation.
        denom: u64,
    },
}

/// Value of a character at a point: zero off the units, a root of unity on
/// them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CharValue {
    Zero,
    Root(RootOfUnity),
}

impl CharValue {
    pub fn to_complex(&self) -> Complex64 {
        match self {
            CharValue::Zero => Complex64::new(0.0, 0.0),
            CharValue::Root(r) => r.to_complex(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, CharValue::Zero)
    }
}

/// A Dirichlet character mod q with exact evaluation.
#[derive(Debug, Clone)]
pub struct Character {
    q: u64,
    kind: Kind,
    order: u64,
    principal: bool,
    conductor: u64,
}

impl Character {
    /// Character defined by its exponents against the unit-group generators:
    /// chi(g_i) = exp(2*pi*i * exponents[i] / order(g_i)). The exponent list
    /// must have one entry per generator (two for the 2^a component, a >= 3).
    pub fn from_exponents(q: u64, exponents: &[i64]) -> Result<Self> {
        let structure = UnitStructure::new(q)?;
        Self::from_structure(structure, exponents)
    }

    /// Same as [`Character::from_exponents`] but reusing a shared structure.
    pub fn from_structure(structure: Arc<UnitStructure>, exponents: &[i64]) -> Result<Self> {
        let orders = structure.generator_orders();
        if exponents.len() != orders.len() {
            return Err(Error::InvalidInput {
                what: "character exponents",
                detail: format!(
                    "modulus {} has {} unit-group generators, got {} exponents",
                    structure.q,
                    orders.len(),
                    exponents.len()
                ),
            });
        }
        let exponents: Vec<u64> = exponents
            .iter()
            .zip(orders)
            .map(|(&c, &d)| c.rem_euclid(d as i64) as u64)
            .collect();
        let order = exponents
            .iter()
            .zip(orders)
            .map(|(&c, &d)| d / arith::gcd(c, d))
            .fold(1u64, |acc, o| acc / arith::gcd(acc, o) * o);
        let denom = orders
            .iter()
            .fold(1u64, |acc, &d| acc / arith::gcd(acc, d) * d);
        let principal = exponents.iter().all(|&c| c == 0);
        let conductor = table_conductor(&structure, &exponents);
        Ok(Character {
            q: structure.q,
            kind: Kind::Table {
                structure,
                exponents,
                denom,
            },
            order,
            principal,
            conductor,
        })
    }

    /// The quadratic character chi(n) = (n | q) for odd q, evaluated through
    /// the Jacobi symbol. Primitive exactly when q is squarefree.
    pub fn quadratic(q: u64) -> Result<Self> {
        if q % 2 == 0 {
            return Err(Error::EvenModulus { q });
        }
        // Conductor: product of the primes dividing q to an odd power.
        let mut conductor = 1u64;
        let mut order = 1u64;
        for &(p, a) in &arith::factorize(q).factors {
            if a % 2 == 1 {
                conductor *= p;
                order = 2;
            }
        }
        Ok(Character {
            q,
            kind: Kind::Quadratic,
            order,
            principal: order == 1,
            conductor,
        })
    }

    /// The principal character mod q (table mode; q must fit the table cap).
    pub fn principal(q: u64) -> Result<Self> {
        let structure = UnitStructure::new(q)?;
        let zeros = vec![0i64; structure.generator_orders().len()];
        Self::from_structure(structure, &zeros)
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    /// Order of the character in the dual group.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_principal(&self) -> bool {
        self.principal
    }

    /// Smallest modulus inducing this character.
    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.q
    }

    /// True when the character takes only real values (order <= 2).
    pub fn is_real(&self) -> bool {
        self.order <= 2
    }

    /// Exact evaluation; n is reduced mod q.
    pub fn eval(&self, n: i64) -> CharValue {
        match &self.kind {
            Kind::Quadratic => match arith::jacobi(n, self.q).expect("odd modulus") {
                0 => CharValue::Zero,
                1 => CharValue::Root(RootOfUnity::new(0, 1)),
                _ => CharValue::Root(RootOfUnity::new(1, 2)),
            },
            Kind::Table {
                structure,
                exponents,
                denom,
            } => {
                if self.q == 1 {
                    return CharValue::Root(RootOfUnity::one());
                }
                let x = n.rem_euclid(self.q as i64) as u64;
                let mut num = 0u64;
                let mut idx = 0usize;
                for comp in &structure.components {
                    match comp.dlogs(x) {
                        None => return CharValue::Zero,
                        Some(ds) => {
                            for (&d, &t) in comp.orders.iter().zip(ds) {
                                let c = exponents[idx];
                                // accumulate c * t / d over the common denominator
                                let scale = denom / d;
                                num = (num
                                    + (c as u128 * t as u128 % d as u128) as u64 * scale)
                                    % denom;
                                idx += 1;
                            }
                        }
                    }
                }
                CharValue::Root(RootOfUnity::new(num as i64, *denom))
            }
        }
    }

    /// Evaluation as a complex double.
    pub fn eval_complex(&self, n: i64) -> Complex64 {
        self.eval(n).to_complex()
    }

    /// Fast integer path for real characters: -1, 0, or 1.
    pub fn eval_real(&self, n: i64) -> Option<i8> {
        if !self.is_real() {
            return None;
        }
        match &self.kind {
            Kind::Quadratic => Some(arith::jacobi(n, self.q).expect("odd modulus")),
            Kind::Table { .. } => Some(match self.eval(n) {
                CharValue::Zero => 0,
                CharValue::Root(r) => {
                    if r.numerator() == 0 {
                        1
                    } else {
                        -1
                    }
                }
            }),
        }
    }

    /// All phi(q) characters mod q, ordered by exponent tuples. Capped at
    /// q <= 10^4; intended for exhaustive checks.
    pub fn enumerate(q: u64) -> Result<Vec<Character>> {
        if q > ENUMERATION_CAP {
            return Err(Error::ModulusTooLarge {
                q,
                cap: ENUMERATION_CAP,
            });
        }
        let structure = UnitStructure::new(q)?;
        let orders = structure.generator_orders().to_vec();
        let mut out = Vec::new();
        let mut exps = vec![0i64; orders.len()];
        loop {
            out.push(Self::from_structure(structure.clone(), &exps)?);
            // odometer increment over the exponent ranges
            let mut i = 0;
            loop {
                if i == exps.len() {
                    return Ok(out);
                }
                exps[i] += 1;
                if (exps[i] as u64) < orders[i] {
                    break;
                }
                exps[i] = 0;
                i += 1;
            }
        }
    }
}

/// Conductor of a table-mode character, componentwise: for each prime power
/// the smallest level whose unit group the component character factors
/// through.
fn table_conductor(structure: &UnitStructure, exponents: &[u64]) -> u64 {
    let mut conductor = 1u64;
    let mut idx = 0usize;
    for comp in &structure.components {
        let p = arith::factorize(comp.modulus).factors[0].0;
        match comp.orders.len() {
            0 => {}
            1 => {
                let d = comp.orders[0];
                let c = exponents[idx];
                let ord = d / arith::gcd(c, d);
                idx += 1;
                if ord > 1 {
                    if p == 2 {
                        // modulus 4, order-2 component
                        conductor *= 4;
                    } else {
                        // smallest b >= 1 with ord | p^(b-1) * (p-1)
                        let mut level = p;
                        let mut phi = p - 1;
                        while phi % ord != 0 {
                            level *= p;
                            phi *= p;
                        }
                        conductor *= level;
                    }
                }
            }
            2 => {
                let c_neg = exponents[idx];
                let c_five = exponents[idx + 1];
                idx += 2;
                let d_five = comp.orders[1];
                let ord_five = d_five / arith::gcd(c_five, d_five);
                if ord_five > 1 {
                    conductor *= 4 * ord_five;
                } else if c_neg % 2 == 1 {
                    conductor *= 4;
                }
            }
            _ => unreachable!(),
        }
    }
    conductor
}
