fn main() -> std::process::ExitCode {
    std::process::ExitCode::from(outsel::cli::main_exit_code())
}
