use std::process::Command;

fn main() {
    let describe = Command::new("git")
        .args(["describe", "--tags", "--always", "--dirty"])
        .output()
        .ok()
        .filter(|o| o.status.success())
        .and_then(|o| String::from_utf8(o.stdout).ok())
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty());
    let version = env!("CARGO_PKG_VERSION");
    let full = match describe {
        Some(d) => format!("{version}+{d}"),
        None => version.to_string(),
    };
    println!("cargo:rustc-env=MBRING_VERSION={full}");
    println!("cargo:rerun-if-changed=build.rs");
}
