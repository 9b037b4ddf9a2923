use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use diracflow::algebra::Generator;
use diracflow::series::{
    bp_flow_series, hnw_series, omega_series, omega_u_at_infinity, omega_u_series, SeriesTable,
};

use crate::{RunConfig, What};

/// Order 12 takes seconds; each further even order costs roughly six times more.
pub const MAX_SUPPORTED_ORDER: u32 = 12;

/// File stem and table for one series family.
pub fn family(
    what: What,
    field: Generator,
    max_order: u32,
) -> anyhow::Result<(&'static str, SeriesTable)> {
    Ok(match what {
        What::Omega => ("omega", omega_series(field, max_order)),
        What::OmegaS => ("Omega_s", omega_u_series(field, max_order)?),
        What::OmegaInf => ("Omega_inf", omega_u_at_infinity(field, max_order)?),
        What::H => ("h", hnw_series(field, max_order)?),
        What::HU => ("hU", bp_flow_series(max_order)?),
        What::All => unreachable!("expanded by the caller"),
    })
}

pub fn file_name(stem: &str, order: u32) -> String {
    format!("{stem}_{order}.txt")
}

enum Written {
    Created,
    Unchanged,
    Blessed,
    Mismatch,
}

fn write_term(path: &Path, text: &str, bless: bool) -> anyhow::Result<Written> {
    let existing = match fs::read_to_string(path) {
        Ok(s) => Some(s),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => None,
        Err(e) => return Err(e).with_context(|| format!("reading {}", path.display())),
    };
    let outcome = match existing {
        None => Written::Created,
        Some(s) if s == text => return Ok(Written::Unchanged),
        Some(_) if bless => Written::Blessed,
        Some(_) => return Ok(Written::Mismatch),
    };
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(outcome)
}

pub fn run(cfg: &RunConfig) -> anyhow::Result<bool> {
    if cfg.max_order == 0 || cfg.max_order > MAX_SUPPORTED_ORDER {
        bail!("--max-order must lie in 1..={MAX_SUPPORTED_ORDER}");
    }
    let dir = cfg
        .output_path
        .clone()
        .unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    let families = match cfg.what {
        What::All => vec![What::Omega, What::OmegaS, What::OmegaInf, What::H, What::HU],
        w => vec![w],
    };
    let mut ok = true;
    for what in families {
        let (stem, table) = family(what, cfg.field.into(), cfg.max_order)?;
        for (n, term) in table.iter() {
            let name = file_name(stem, n);
            let status = match write_term(&dir.join(&name), &format!("{term}\n"), cfg.bless)? {
                Written::Created => "written",
                Written::Unchanged => "unchanged",
                Written::Blessed => "blessed",
                Written::Mismatch => {
                    ok = false;
                    "MISMATCH (rerun with --bless to overwrite)"
                }
            };
            println!("{name}: {status}");
        }
    }
    Ok(ok)
}
