fn main() -> std::process::ExitCode {
    hyperverma::cli::main_with_args(std::env::args_os())
}
