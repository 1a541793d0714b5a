//! Verification campaigns and their machine-readable reports.

mod campaigns;
pub mod report;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use clap::Parser;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::Field;
use crate::orbital::alpha_grid;

pub use report::{CheckRecord, Report, Summary};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConfigError {
    NotPrimePower(u32),
    EvenCharacteristic(u32),
    Rank(usize),
    UnknownCampaign(String),
    Alpha(String),
    Mode(String),
    Identity(String),
    Threads,
    Unsupported(String),
    Io(String),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::NotPrimePower(q) => write!(f, "q = {q} is not a prime power"),
            ConfigError::EvenCharacteristic(q) => write!(f, "q = {q} has characteristic 2"),
            ConfigError::Rank(r) => write!(f, "rank {r} is not supported (need r >= 2)"),
            ConfigError::UnknownCampaign(s) => write!(f, "unknown campaign '{s}'"),
            ConfigError::Alpha(s) => write!(f, "bad alpha policy '{s}' (expected all or sample:N)"),
            ConfigError::Mode(s) => write!(f, "bad mode '{s}' (expected exact or float)"),
            ConfigError::Identity(s) => write!(f, "bad identity '{s}' (expected stated or normalized)"),
            ConfigError::Threads => write!(f, "threads must be at least 1"),
            ConfigError::Unsupported(s) => write!(f, "{s}"),
            ConfigError::Io(s) => write!(f, "i/o error: {s}"),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Campaign {
    #[serde(rename = "zeta-identity")]
    ZetaIdentity,
    #[serde(rename = "local-r2")]
    LocalR2,
    #[serde(rename = "local-r3")]
    LocalR3,
    #[serde(rename = "theorem-b")]
    TheoremB,
    #[serde(rename = "resultant")]
    Resultant,
    #[serde(rename = "weil-product")]
    WeilProduct,
    #[serde(rename = "cocycle")]
    Cocycle,
    #[serde(rename = "kappa")]
    Kappa,
}

impl Campaign {
    pub const ALL: [Campaign; 8] = [
        Campaign::ZetaIdentity,
        Campaign::LocalR2,
        Campaign::LocalR3,
        Campaign::TheoremB,
        Campaign::Resultant,
        Campaign::WeilProduct,
        Campaign::Cocycle,
        Campaign::Kappa,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Campaign::ZetaIdentity => "zeta-identity",
            Campaign::LocalR2 => "local-r2",
            Campaign::LocalR3 => "local-r3",
            Campaign::TheoremB => "theorem-b",
            Campaign::Resultant => "resultant",
            Campaign::WeilProduct => "weil-product",
            Campaign::Cocycle => "cocycle",
            Campaign::Kappa => "kappa",
        }
    }
}

impl FromStr for Campaign {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Campaign::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| ConfigError::UnknownCampaign(s.to_string()))
    }
}

impl fmt::Display for Campaign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which alpha tuples the orbital campaigns visit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlphaPolicy {
    All,
    Sample(usize),
}

impl FromStr for AlphaPolicy {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "all" {
            return Ok(AlphaPolicy::All);
        }
        s.strip_prefix("sample:")
            .and_then(|n| n.parse().ok())
            .filter(|&n: &usize| n > 0)
            .map(AlphaPolicy::Sample)
            .ok_or_else(|| ConfigError::Alpha(s.to_string()))
    }
}

impl fmt::Display for AlphaPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphaPolicy::All => write!(f, "all"),
            AlphaPolicy::Sample(n) => write!(f, "sample:{n}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ValueMode {
    Exact,
    /// exact comparison plus an agreement check in complex doubles
    Float,
}

impl FromStr for ValueMode {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(ValueMode::Exact),
            "float" => Ok(ValueMode::Float),
            _ => Err(ConfigError::Mode(s.to_string())),
        }
    }
}

/// Which form of the orbital identities decides pass/fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Identity {
    /// J = tf I as written
    Stated,
    /// J = eps(alpha) tf I
    Normalized,
}

impl FromStr for Identity {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "stated" => Ok(Identity::Stated),
            "normalized" => Ok(Identity::Normalized),
            _ => Err(ConfigError::Identity(s.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CampaignConfig {
    pub p: u32,
    pub m: u32,
    pub r: usize,
    pub vmax: u32,
    /// None: all of (k^*)^{r-1} for q = 3, eight sampled tuples otherwise
    pub alpha: Option<AlphaPolicy>,
    pub mode: ValueMode,
    pub identity: Identity,
    pub campaigns: Vec<Campaign>,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub threads: usize,
    /// sample count for the randomized campaigns; None picks per campaign
    pub samples: Option<usize>,
    /// record wall-clock micros (otherwise 0, keeping reports reproducible)
    pub timing: bool,
}

impl CampaignConfig {
    pub fn new(q: u32) -> Result<CampaignConfig, ConfigError> {
        let (p, m) = split_prime_power(q)?;
        Ok(CampaignConfig {
            p,
            m,
            r: 2,
            vmax: 1,
            alpha: None,
            mode: ValueMode::Exact,
            identity: Identity::Stated,
            campaigns: vec![],
            out: None,
            seed: 0,
            threads: 1,
            samples: None,
            timing: false,
        })
    }

    pub fn q(&self) -> u32 {
        self.p.pow(self.m)
    }

    pub fn field(&self) -> Result<Field, ConfigError> {
        Field::new(self.p, self.m).map_err(|e| ConfigError::Unsupported(e.to_string()))
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.p == 2 {
            return Err(ConfigError::EvenCharacteristic(self.q()));
        }
        if !is_prime(self.p) || self.m == 0 {
            return Err(ConfigError::NotPrimePower(self.q()));
        }
        if self.r < 2 {
            return Err(ConfigError::Rank(self.r));
        }
        if self.threads == 0 {
            return Err(ConfigError::Threads);
        }
        self.field()?;
        Ok(())
    }

    pub fn alpha_policy(&self) -> AlphaPolicy {
        self.alpha.unwrap_or(if self.q() == 3 { AlphaPolicy::All } else { AlphaPolicy::Sample(8) })
    }

    /// The alpha tuples for rank r under the configured policy.
    pub fn alphas(&self, k: &Field, r: usize) -> Vec<Vec<u32>> {
        let grid = alpha_grid(k, r);
        match self.alpha_policy() {
            AlphaPolicy::All => grid,
            AlphaPolicy::Sample(n) if n >= grid.len() => grid,
            AlphaPolicy::Sample(n) => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ 0xa1fa);
                let mut idx: Vec<usize> = (0..grid.len()).collect::<Vec<_>>().choose_multiple(&mut rng, n).copied().collect();
                idx.sort();
                idx.into_iter().map(|i| grid[i].clone()).collect()
            }
        }
    }

    pub fn rng(&self, campaign: Campaign) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ campaign as u64)
    }
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// q = p^m with p prime.
pub fn split_prime_power(q: u32) -> Result<(u32, u32), ConfigError> {
    let p = (2..=q).find(|d| q % d == 0).ok_or(ConfigError::NotPrimePower(q))?;
    let (mut x, mut m) = (q, 0);
    while x % p == 0 {
        x /= p;
        m += 1;
    }
    if x != 1 {
        return Err(ConfigError::NotPrimePower(q));
    }
    if p == 2 {
        return Err(ConfigError::EvenCharacteristic(q));
    }
    Ok((p, m))
}

#[derive(Parser, Debug)]
#[command(name = "metafl", about = "Run exact verification campaigns for metaplectic orbital sums")]
pub struct Args {
    /// size of the constant field (odd prime power)
    #[arg(long, default_value_t = 3)]
    pub q: u32,
    /// rank for theorem-b, resultant, cocycle and kappa
    #[arg(long, default_value_t = 2)]
    pub r: usize,
    /// bound on the valuations v(a_i) in the local sweeps
    #[arg(long, default_value_t = 1)]
    pub vmax: u32,
    /// all | sample:N
    #[arg(long)]
    pub alpha: Option<String>,
    /// campaign to run (repeatable)
    #[arg(long = "campaign")]
    pub campaigns: Vec<String>,
    /// exact | float
    #[arg(long, default_value = "exact")]
    pub mode: String,
    /// stated | normalized
    #[arg(long, default_value = "stated")]
    pub identity: String,
    /// JSON report path; the CSV goes next to it
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// sample count for randomized campaigns
    #[arg(long)]
    pub samples: Option<usize>,
    /// record per-check wall-clock time
    #[arg(long)]
    pub timing: bool,
}

impl Args {
    pub fn config(&self) -> Result<CampaignConfig, ConfigError> {
        let mut c = CampaignConfig::new(self.q)?;
        c.r = self.r;
        c.vmax = self.vmax;
        c.alpha = self.alpha.as_deref().map(str::parse).transpose()?;
        c.mode = self.mode.parse()?;
        c.identity = self.identity.parse()?;
        c.campaigns = self.campaigns.iter().map(|s| s.parse()).collect::<Result<_, _>>()?;
        c.out = self.out.clone();
        c.seed = self.seed;
        c.threads = self.threads;
        c.samples = self.samples;
        c.timing = self.timing;
        c.validate()?;
        Ok(c)
    }
}

/// Runs every selected campaign, in the order given.
pub fn run_campaign(config: &CampaignConfig) -> Result<Report, ConfigError> {
    config.validate()?;
    let mut checks = vec![];
    for &c in &config.campaigns {
        checks.extend(campaigns::run(config, c)?);
    }
    Ok(Report::new(config, checks))
}

/// Maps `f` over `items` on up to `threads` workers; results keep input order.
pub(crate) fn par_map<T: Sync, R: Send>(items: &[T], threads: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    if threads <= 1 || items.len() <= 1 {
        return items.iter().map(f).collect();
    }
    let next = std::sync::atomic::AtomicUsize::new(0);
    let mut parts: Vec<(usize, R)> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..threads.min(items.len()))
            .map(|_| {
                s.spawn(|| {
                    let mut out = vec![];
                    loop {
                        let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                        if i >= items.len() {
                            break out;
                        }
                        out.push((i, f(&items[i])));
                    }
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    });
    parts.sort_by_key(|(i, _)| *i);
    parts.into_iter().map(|(_, r)| r).collect()
}

/// Runs `f` and returns its result with the elapsed micros (0 unless timing).
pub(crate) fn timed<R>(timing: bool, f: impl FnOnce() -> R) -> (R, u64) {
    let start = Instant::now();
    let r = f();
    (r, if timing { start.elapsed().as_micros() as u64 } else { 0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(q: u32, campaigns: &[Campaign]) -> CampaignConfig {
        let mut c = CampaignConfig::new(q).unwrap();
        c.campaigns = campaigns.to_vec();
        c
    }

    #[test]
    fn parses_policies() {
        assert_eq!("all".parse::<AlphaPolicy>().unwrap(), AlphaPolicy::All);
        assert_eq!("sample:4".parse::<AlphaPolicy>().unwrap(), AlphaPolicy::Sample(4));
        assert!("sample:0".parse::<AlphaPolicy>().is_err());
        assert!("some".parse::<AlphaPolicy>().is_err());
        assert_eq!("local-r2".parse::<Campaign>().unwrap(), Campaign::LocalR2);
        assert!("local-r4".parse::<Campaign>().is_err());
        assert_eq!(split_prime_power(9).unwrap(), (3, 2));
        assert_eq!(split_prime_power(4), Err(ConfigError::EvenCharacteristic(4)));
        assert_eq!(split_prime_power(15), Err(ConfigError::NotPrimePower(15)));
    }

    #[test]
    fn empty_campaign_list() {
        let rep = run_campaign(&config(3, &[])).unwrap();
        assert!(rep.checks.is_empty());
        assert_eq!(rep.exit_code(), 0);
    }

    #[test]
    fn zeta_identity_gf3() {
        let rep = run_campaign(&config(3, &[Campaign::ZetaIdentity])).unwrap();
        assert_eq!(rep.checks.len(), 6);
        assert!(rep.checks.iter().all(|c| c.pass));
        assert_eq!(rep.exit_code(), 0);
    }

    #[test]
    fn local_r2_contains_witness() {
        let rep = run_campaign(&config(3, &[Campaign::LocalR2])).unwrap();
        let w = rep
            .checks
            .iter()
            .find(|c| c.inputs["a"] == "[pi^1*(1), (2)]" && c.inputs["alpha"] == "[1]")
            .expect("witness present");
        assert_eq!(w.values["I"]["exact"][0], "-1");
        assert_eq!(w.values["card_x"], 2);
        // eps = -1 here, so only the normalized form holds
        assert_eq!(w.values["holds_normalized"], true);
        assert!(!w.pass);
        assert_eq!(rep.exit_code(), 1);
    }

    #[test]
    fn reports_are_deterministic() {
        let mut c = config(3, &[Campaign::LocalR2, Campaign::Cocycle, Campaign::WeilProduct]);
        c.samples = Some(20);
        c.seed = 7;
        let a = run_campaign(&c).unwrap();
        assert_eq!(a.to_json(), run_campaign(&c).unwrap().to_json());
        c.threads = 3;
        let b = run_campaign(&c).unwrap();
        let checks = |r: &Report| serde_json::to_string(&r.checks).unwrap();
        assert_eq!(checks(&a), checks(&b));
    }

    #[test]
    fn alpha_sample_is_stable() {
        let mut c = config(5, &[]);
        let k = c.field().unwrap();
        assert_eq!(c.alphas(&k, 3).len(), 8);
        assert_eq!(c.alphas(&k, 3), c.alphas(&k, 3));
        c.alpha = Some(AlphaPolicy::All);
        assert_eq!(c.alphas(&k, 3).len(), 16);
    }

    #[test]
    fn float_mode_agrees() {
        let mut c = config(3, &[Campaign::LocalR2]);
        c.mode = ValueMode::Float;
        c.identity = Identity::Normalized;
        let rep = run_campaign(&c).unwrap();
        assert!(rep.checks.iter().all(|c| c.pass && c.values["float_agrees"] == true));
    }

    #[test]
    fn par_map_keeps_order() {
        let v: Vec<usize> = (0..50).collect();
        assert_eq!(par_map(&v, 4, |x| x * 2), v.iter().map(|x| x * 2).collect::<Vec<_>>());
    }
}
