fn main() -> std::process::ExitCode {
    citeclass_cli::main_with_args(std::env::args_os())
}
