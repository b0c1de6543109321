package org.argouml.application.events;

import java.util.EventObject;

public abstract class ArgoEvent extends EventObject {
    public static final int ANY_STATUS_EVENT = 2000;

    protected int eventType;

    public ArgoEvent(int eT, Object src) {
        super(src);
        eventType = eT;
    }

    public int getEventType() {
        return eventType;
    }

    public abstract int getEventStartRange();
}
