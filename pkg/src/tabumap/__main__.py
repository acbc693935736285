from tabumap.cli import main

main()
