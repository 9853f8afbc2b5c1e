import { SessionClient } from "./api";
import { App } from "./ui";
import "./style.css";

new App(document.getElementById("app")!, new SessionClient());
