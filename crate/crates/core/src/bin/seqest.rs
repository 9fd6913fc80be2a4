fn main() -> std::process::ExitCode {
    seqest::cli::run(std::env::args_os())
}
