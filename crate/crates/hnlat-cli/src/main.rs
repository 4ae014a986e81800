//! Binary shim: all behavior lives in the library so tests can drive it
//! in-process.

fn main() {
    let code = hnlat_cli::run(
        std::env::args_os(),
        &mut std::io::stdout(),
        &mut std::io::stderr(),
    );
    std::process::exit(code);
}
