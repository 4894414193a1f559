fn main() {
    std::process::exit(paradigm_profiler::cli::main());
}
