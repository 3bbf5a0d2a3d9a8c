#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn gsnoise(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gsnoise"))
        .args(args)
        .output()
        .expect("binary runs")
}

pub fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

pub fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

pub fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

pub const PARAMS_P2: &str = "alpha = 1.2
gamma_g = 2.0
gamma_s = 2.0
rho = 0.5
p = 2
sigma_tilde = [1.0, 0.7, 0.7, 1.0]
seed = 9
";
