fn main() {
    std::process::exit(orbit_lab::cli::main_with(std::env::args_os()));
}
