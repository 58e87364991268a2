from twisted_forms.cli import main

main(prog_name="twisted-forms")
