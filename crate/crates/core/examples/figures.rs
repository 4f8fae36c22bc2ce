//! Writes the nine figure series into a directory (default `figures/`).
//!
//! `cargo run --example figures -- out/dir`

use std::path::PathBuf;

use darboux::cli::{emit_figure, Flags};

fn main() -> darboux::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "figures".into()));
    std::fs::create_dir_all(&dir)?;
    for id in 1..=9 {
        let flags = Flags {
            out: Some(dir.join(format!("figure_{id}.csv"))),
            ..Flags::default()
        };
        println!("{}", emit_figure(id, &flags)?.display());
    }
    Ok(())
}
