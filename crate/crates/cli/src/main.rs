fn main() -> std::process::ExitCode {
    axelrod_cli::run_cli(std::env::args_os())
}
