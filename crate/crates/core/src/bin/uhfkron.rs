fn main() {
    let (code, out) = uhfkron::cli::run(std::env::args_os());
    println!("{out}");
    std::process::exit(code);
}
