fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().filter_or("GEODUAL_LOG", "warn")).init();
    std::process::exit(geodual::cli::run(std::env::args_os()));
}
