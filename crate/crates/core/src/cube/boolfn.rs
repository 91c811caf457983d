use std::fs;
use std::path::Path;
use std::sync::OnceLock;

use crate::cube::bias::Bias;
use crate::error::{Error, Result};
use crate::percolation::{has_horizontal_crossing, EdgeConfig, RectLattice};

/// Largest bit count accepted without an explicit override.
pub const DEFAULT_MAX_BITS: usize = 24;

/// Absolute ceiling even with an override: a table of `2^30` reals is 8 GiB.
const HARD_MAX_BITS: usize = 30;

/// Upper bound on the number of bits an exact table may carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BitCap(usize);

impl BitCap {
    /// A cap at or below [`DEFAULT_MAX_BITS`].
    pub fn new(max_bits: usize) -> Result<Self> {
        if max_bits == 0 || max_bits > DEFAULT_MAX_BITS {
            return Err(Error::InvalidParameter(format!(
                "bit cap must be in 1..={DEFAULT_MAX_BITS}, got {max_bits}"
            )));
        }
        Ok(BitCap(max_bits))
    }

    /// Raise the cap past the default.
    pub fn with_override(max_bits: usize) -> Result<Self> {
        if max_bits == 0 || max_bits > HARD_MAX_BITS {
            return Err(Error::InvalidParameter(format!(
                "bit cap must be in 1..={HARD_MAX_BITS}, got {max_bits}"
            )));
        }
        Ok(BitCap(max_bits))
    }

    pub fn get(self) -> usize {
        self.0
    }

    fn check(self, bits: usize) -> Result<()> {
        if bits > self.0 {
            Err(Error::TooManyBits { bits, cap: self.0 })
        } else {
            Ok(())
        }
    }
}

impl Default for BitCap {
    fn default() -> Self {
        BitCap(DEFAULT_MAX_BITS)
    }
}

/// A real-valued function on `{0,1}^n`, stored as a dense table.
///
/// Entry `mask` holds `f(ω)` where bit `i` of `mask` is `ω_{i+1}`.
#[derive(Debug, Clone)]
pub struct BoolFn {
    n: usize,
    values: Vec<f64>,
    boolean: bool,
    monotone: OnceLock<bool>,
}

impl BoolFn {
    pub fn from_table(n: usize, values: Vec<f64>) -> Result<Self> {
        Self::from_table_capped(n, values, BitCap::default())
    }

    pub fn from_table_capped(n: usize, values: Vec<f64>, cap: BitCap) -> Result<Self> {
        cap.check(n)?;
        if values.len() != 1 << n {
            return Err(Error::Table(format!(
                "expected {} entries for n = {n}, got {}",
                1usize << n,
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Table(format!("entry {i} is not finite")));
        }
        let boolean = values.iter().all(|&v| v == 0.0 || v == 1.0);
        Ok(BoolFn {
            n,
            values,
            boolean,
            monotone: OnceLock::new(),
        })
    }

    /// Tabulate `f` over every mask of `n` bits.
    pub fn from_fn(n: usize, f: impl Fn(u64) -> f64) -> Result<Self> {
        BitCap::default().check(n)?;
        let values = (0..1u64 << n).map(f).collect();
        Self::from_table(n, values)
    }

    pub fn constant(n: usize, c: f64) -> Result<Self> {
        Self::from_fn(n, |_| c)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn value(&self, mask: u64) -> f64 {
        self.values[mask as usize]
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Every entry is `0` or `1`.
    pub fn is_boolean(&self) -> bool {
        self.boolean
    }

    /// `f(ω) <= f(ω')` whenever `ω <= ω'` coordinatewise.
    ///
    /// Checking each single-bit step suffices; the result is cached.
    pub fn is_monotone(&self) -> bool {
        *self.monotone.get_or_init(|| {
            (0..self.n).all(|i| {
                let bit = 1usize << i;
                (0..self.values.len())
                    .filter(|m| m & bit == 0)
                    .all(|m| self.values[m] <= self.values[m | bit])
            })
        })
    }

    /// The `±1` encoding `2f - 1` of a boolean-valued function.
    pub fn sign_encoding(&self) -> Result<BoolFn> {
        if !self.boolean {
            return Err(Error::NotBoolean);
        }
        Self::from_table(self.n, self.values.iter().map(|v| 2.0 * v - 1.0).collect())
    }

    /// `E_p[f]` by direct summation.
    pub fn mean(&self, p: Bias) -> f64 {
        let w = super::bias::product_measure(self.n, p.get());
        w.iter().zip(&self.values).map(|(w, v)| w * v).sum()
    }

    /// Read the truth-table file format: first line `n`, then `2^n` reals
    /// in mask order.
    pub fn read_table(path: impl AsRef<Path>, cap: BitCap) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Table(format!("{}: {e}", path.display())))?;
        Self::parse_table(&text, cap)
    }

    pub fn parse_table(text: &str, cap: BitCap) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .by_ref()
            .find(|l| !l.trim().is_empty())
            .ok_or_else(|| Error::Table("empty table".into()))?;
        let n: usize = header
            .trim()
            .parse()
            .map_err(|_| Error::Table(format!("bad bit count `{}`", header.trim())))?;
        cap.check(n)?;
        let values = lines
            .flat_map(str::split_whitespace)
            .map(|tok| {
                tok.parse::<f64>()
                    .map_err(|_| Error::Table(format!("bad value `{tok}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_table_capped(n, values, cap)
    }

    /// Serialize in the truth-table file format.
    pub fn to_table_string(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for chunk in self.values.chunks(8) {
            let line: Vec<String> = chunk.iter().map(|v| format!("{v:?}")).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Build a function from a descriptor such as `majority:5` or `crossing:2:2`.
pub fn build_function(descriptor: &str) -> Result<BoolFn> {
    build_function_with_cap(descriptor, BitCap::default())
}

pub fn build_function_with_cap(descriptor: &str, cap: BitCap) -> Result<BoolFn> {
    let bad = |reason: &str| Error::BadDescriptor {
        descriptor: descriptor.to_string(),
        reason: reason.to_string(),
    };
    let (head, rest) = descriptor.split_once(':').unwrap_or((descriptor, ""));
    if head == "table" {
        if rest.is_empty() {
            return Err(bad("missing path"));
        }
        return BoolFn::read_table(rest, cap);
    }
    let args: Vec<&str> = if rest.is_empty() {
        Vec::new()
    } else {
        rest.split(':').collect()
    };
    let uint = |s: &str| -> Result<usize> {
        s.trim()
            .parse::<usize>()
            .map_err(|_| bad(&format!("`{s}` is not a non-negative integer")))
    };
    let arity = |k: usize| -> Result<()> {
        if args.len() == k {
            Ok(())
        } else {
            Err(bad(&format!(
                "expected {k} argument(s), got {}",
                args.len()
            )))
        }
    };
    let bits = |n: usize| -> Result<usize> {
        if n == 0 {
            return Err(bad("need at least one bit"));
        }
        cap.check(n)?;
        Ok(n)
    };
    let tab = |n: usize, f: &dyn Fn(u64) -> f64| -> Result<BoolFn> {
        let values = (0..1u64 << n).map(f).collect();
        BoolFn::from_table_capped(n, values, cap)
    };

    match head {
        "dictator" => {
            arity(1)?;
            let n = bits(uint(args[0])?)?;
            tab(n, &|m| (m & 1) as f64)
        }
        "parity" => {
            arity(1)?;
            let n = bits(uint(args[0])?)?;
            tab(n, &|m| (m.count_ones() & 1) as f64)
        }
        "majority" => {
            arity(1)?;
            let n = bits(uint(args[0])?)?;
            if n % 2 == 0 {
                return Err(bad("majority needs an odd number of bits"));
            }
            let half = n as u32 / 2;
            tab(n, &|m| (m.count_ones() > half) as u8 as f64)
        }
        "and" => {
            arity(1)?;
            let n = bits(uint(args[0])?)?;
            let full = (1u64 << n) - 1;
            tab(n, &|m| (m == full) as u8 as f64)
        }
        "or" => {
            arity(1)?;
            let n = bits(uint(args[0])?)?;
            tab(n, &|m| (m != 0) as u8 as f64)
        }
        "chi" => {
            arity(2)?;
            let n = bits(uint(args[0])?)?;
            let p: f64 = args[1]
                .trim()
                .parse()
                .map_err(|_| bad(&format!("`{}` is not a bias", args[1])))?;
            let p = Bias::new(p)?;
            let full = (1u64 << n) - 1;
            tab(n, &|m| super::fourier::biased_char(m, full, p))
        }
        "tribes" => {
            arity(2)?;
            let (k, w) = (uint(args[0])?, uint(args[1])?);
            if k == 0 || w == 0 {
                return Err(bad("tribes needs positive count and width"));
            }
            let n = bits(k * w)?;
            let block = (1u64 << w) - 1;
            tab(n, &|m| {
                (0..k).any(|t| (m >> (t * w)) & block == block) as u8 as f64
            })
        }
        "crossing" => {
            arity(2)?;
            let lat = RectLattice::new(uint(args[0])?, uint(args[1])?)?;
            let edges = lat.edge_count();
            if edges > DEFAULT_MAX_BITS {
                return Err(bad(&format!("{edges} edges exceeds {DEFAULT_MAX_BITS}")));
            }
            cap.check(edges)?;
            crossing_function(&lat)
        }
        _ => Err(Error::UnknownDescriptor(descriptor.to_string())),
    }
}

/// The horizontal-crossing indicator of `lat` as a function of its edge bits.
pub fn crossing_function(lat: &RectLattice) -> Result<BoolFn> {
    let e = lat.edge_count();
    BitCap::default().check(e)?;
    let values = (0..1u64 << e)
        .map(|mask| {
            let c = EdgeConfig::from_mask(*lat, mask);
            has_horizontal_crossing(&c) as u8 as f64
        })
        .collect();
    BoolFn::from_table(e, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dictator_reads_first_bit() {
        let f = build_function("dictator:3").unwrap();
        assert_eq!(f.values().len(), 8);
        for m in 0..8u64 {
            assert_eq!(f.value(m), (m & 1) as f64);
        }
        assert!(f.is_boolean() && f.is_monotone());
    }

    #[test]
    fn chi_two_bits_at_half() {
        let f = build_function("chi:2:0.5").unwrap();
        assert_eq!(f.value(0b11), 1.0);
        assert_eq!(f.value(0b01), -1.0);
        assert!(!f.is_boolean());
        assert!(!f.is_monotone());
    }

    #[test]
    fn crossing_one_by_one_has_twelve_crossing_inputs() {
        let f = build_function("crossing:1:1").unwrap();
        assert_eq!(f.values().len(), 16);
        assert_eq!(f.values().iter().filter(|&&v| v == 1.0).count(), 12);
        assert!(f.is_monotone());
    }

    #[test]
    fn flags_for_standard_families() {
        for d in ["majority:5", "and:4", "or:3", "tribes:2:3"] {
            let f = build_function(d).unwrap();
            assert!(f.is_boolean() && f.is_monotone(), "{d}");
        }
        let parity = build_function("parity:3").unwrap();
        assert!(parity.is_boolean() && !parity.is_monotone());
        let tribes = build_function("tribes:2:2").unwrap();
        assert_eq!(tribes.value(0b0011), 1.0);
        assert_eq!(tribes.value(0b0101), 0.0);
        assert_eq!(tribes.value(0b1100), 1.0);
    }

    #[test]
    fn descriptor_errors() {
        assert!(matches!(
            build_function("bogus:3"),
            Err(Error::UnknownDescriptor(_))
        ));
        assert!(matches!(
            build_function("majority:4"),
            Err(Error::BadDescriptor { .. })
        ));
        assert!(matches!(
            build_function("parity:25"),
            Err(Error::TooManyBits { bits: 25, cap: 24 })
        ));
        assert!(build_function("crossing:3:3").is_ok());
        assert!(build_function("crossing:4:3").is_err());
        assert!(build_function("chi:2:1.0").is_err());
        assert!(build_function("dictator").is_err());
        let small = BitCap::new(4).unwrap();
        assert!(build_function_with_cap("parity:5", small).is_err());
        assert!(BitCap::new(25).is_err());
        assert_eq!(BitCap::with_override(26).unwrap().get(), 26);
    }

    #[test]
    fn table_format_round_trip() {
        let f = build_function("majority:3").unwrap();
        let text = f.to_table_string();
        let g = BoolFn::parse_table(&text, BitCap::default()).unwrap();
        assert_eq!(f.values(), g.values());

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.txt");
        fs::write(&path, "2\n0 0.5\n0.25 1\n").unwrap();
        let h = build_function(&format!("table:{}", path.display())).unwrap();
        assert_eq!(h.values(), &[0.0, 0.5, 0.25, 1.0]);
        assert!(!h.is_boolean());
    }

    #[test]
    fn malformed_tables() {
        let cap = BitCap::default();
        assert!(BoolFn::parse_table("", cap).is_err());
        assert!(BoolFn::parse_table("2\n1 2 3\n", cap).is_err());
        assert!(BoolFn::parse_table("x\n", cap).is_err());
        assert!(BoolFn::parse_table("1\n0 nan\n", cap).is_err());
        assert!(BoolFn::parse_table("1\n0 abc\n", cap).is_err());
        assert!(build_function("table:/nonexistent/file").is_err());
    }
}
