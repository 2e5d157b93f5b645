fn main() {
    env_logger::init();
    std::process::exit(wavefront::cli::main_with_args(std::env::args_os()));
}
