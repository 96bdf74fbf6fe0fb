//! Flag parsing and validation into a [`RunConfig`].

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use sha2::{Digest, Sha256};

pub const CACHE_ENV: &str = "DILATATION_LAB_CACHE";

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommandKind {
    Construct,
    Certify,
    Search,
    Prove,
}

impl fmt::Display for CommandKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CommandKind::Construct => "construct",
            CommandKind::Certify => "certify",
            CommandKind::Search => "search",
            CommandKind::Prove => "prove",
        })
    }
}

/// `--k 5` or `--k 2..10` (inclusive).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KRange {
    pub lo: usize,
    pub hi: usize,
}

impl FromStr for KRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("`{t}` is not a nonnegative integer"))
        };
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
            None => {
                let k = num(s)?;
                (k, k)
            }
        };
        if lo > hi {
            return Err(format!("empty range {lo}..{hi}"));
        }
        Ok(KRange { lo, hi })
    }
}

/// Accepts `p/q`, decimals such as `0.001`, and scientific notation `1e-12`.
pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    let bad = || format!("`{s}` is not a rational number");
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    if matches!(digits.as_str(), "" | "-" | "+") {
        return Err(bad());
    }
    let n: BigInt = digits.parse().map_err(|_| bad())?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    Ok(if scale >= 0 {
        BigRational::from_integer(n * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(n, num_traits::pow(ten, (-scale) as usize))
    })
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: CommandKind,
    pub ks: Vec<usize>,
    pub tol: BigRational,
    pub prime_bound: u64,
    pub elimination: bool,
    pub max_len: usize,
    pub format: Format,
    pub cache_dir: Option<PathBuf>,
}

pub struct RawFlags {
    pub k: Option<KRange>,
    pub tol: String,
    pub prime_bound: u64,
    pub elimination: bool,
    pub max_len: usize,
    pub format: Format,
    pub cache: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(command: CommandKind, flags: RawFlags, k_required: bool) -> Result<Self, String> {
        let ks: Vec<usize> = match &flags.k {
            Some(range) => (range.lo..=range.hi).collect(),
            None if k_required => return Err("--k is required".into()),
            None => Vec::new(),
        };
        if let Some(&k) = ks.iter().find(|&&k| k < 2) {
            return Err(format!("k must be at least 2, got {k}"));
        }
        if ks.len() > 1 && command != CommandKind::Certify {
            return Err(format!("{command} takes a single k"));
        }
        let tol = parse_rational(&flags.tol)?;
        if !tol.is_positive() {
            return Err("--tol must be positive".into());
        }
        if flags.prime_bound < 3 {
            return Err("--prime-bound must be at least 3".into());
        }
        let cache_dir = std::env::var_os(CACHE_ENV)
            .filter(|v| !v.is_empty())
            .map(PathBuf::from)
            .or(flags.cache);
        Ok(RunConfig {
            command,
            ks,
            tol,
            prime_bound: flags.prime_bound,
            elimination: flags.elimination,
            max_len: flags.max_len,
            format: flags.format,
            cache_dir,
        })
    }

    /// SHA-256 over every setting that can change a result.
    pub fn hash(&self) -> String {
        let canonical = format!(
            "command={};tol={};prime_bound={};elimination={};max_len={}",
            self.command, self.tol, self.prime_bound, self.elimination, self.max_len
        );
        let digest = Sha256::digest(canonical.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("1e-12").unwrap(), q(1, 1_000_000_000_000));
        assert_eq!(parse_rational("3/6").unwrap(), q(1, 2));
        assert_eq!(parse_rational("0.025").unwrap(), q(1, 40));
        assert_eq!(parse_rational("-2.5E1").unwrap(), q(-25, 1));
        assert_eq!(parse_rational(".5").unwrap(), q(1, 2));
        for bad in ["", "abc", "1/0", "e5", "-", "1e"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn k_ranges() {
        assert_eq!("7".parse::<KRange>().unwrap(), KRange { lo: 7, hi: 7 });
        assert_eq!("2..10".parse::<KRange>().unwrap(), KRange { lo: 2, hi: 10 });
        assert_eq!("2..=4".parse::<KRange>().unwrap(), KRange { lo: 2, hi: 4 });
        assert!("5..3".parse::<KRange>().is_err());
        assert!("x".parse::<KRange>().is_err());
    }

    fn flags(k: &str) -> RawFlags {
        RawFlags {
            k: Some(k.parse().unwrap()),
            tol: "1e-12".into(),
            prime_bound: 200,
            elimination: false,
            max_len: 2,
            format: Format::Text,
            cache: None,
        }
    }

    #[test]
    fn validation() {
        assert!(RunConfig::new(CommandKind::Construct, flags("1"), true).is_err());
        assert!(RunConfig::new(CommandKind::Construct, flags("2..3"), true).is_err());
        assert_eq!(RunConfig::new(CommandKind::Certify, flags("2..4"), true).unwrap().ks, vec![2, 3, 4]);
        let mut f = flags("3");
        f.tol = "0".into();
        assert!(RunConfig::new(CommandKind::Certify, f, true).is_err());
        let mut f = flags("3");
        f.prime_bound = 2;
        assert!(RunConfig::new(CommandKind::Certify, f, true).is_err());
    }

    #[test]
    fn hash_tracks_settings() {
        let a = RunConfig::new(CommandKind::Certify, flags("3"), true).unwrap();
        let mut f = flags("4");
        let b = RunConfig::new(CommandKind::Certify, flags("4"), true).unwrap();
        assert_eq!(a.hash(), b.hash());
        f.elimination = true;
        let c = RunConfig::new(CommandKind::Certify, f, true).unwrap();
        assert_ne!(a.hash(), c.hash());
        assert_eq!(a.hash().len(), 64);
    }
}
