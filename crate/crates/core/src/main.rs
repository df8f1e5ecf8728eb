fn main() -> std::process::ExitCode {
    plasma_skin::cli::run(std::env::args_os())
}
