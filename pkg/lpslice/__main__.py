from lpslice.main import main

raise SystemExit(main())
