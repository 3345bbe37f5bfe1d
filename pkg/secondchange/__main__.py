from secondchange.main import main

main()
