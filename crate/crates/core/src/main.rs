fn main() {
    let (out, err, status) = transverse_dolbeault::cli::run(std::env::args_os());
    print!("{out}");
    eprint!("{err}");
    std::process::exit(status);
}
