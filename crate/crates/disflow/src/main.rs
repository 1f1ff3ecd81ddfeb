fn main() {
    if let Err(err) = disflow::cli::run() {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}
