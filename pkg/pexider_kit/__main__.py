from pexider_kit.main import main

main(prog_name="pexider-kit")
