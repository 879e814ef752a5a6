from facloc.cli import main

raise SystemExit(main())
